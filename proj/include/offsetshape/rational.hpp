#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include "offsetshape/errors.hpp"

namespace offsetshape {

using BigInt = boost::multiprecision::cpp_int;

/// Arbitrary-precision rational; always normalized (lowest terms, positive
/// denominator) by the backend.
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }
inline double to_double(double r) { return r; }

inline Rat rat(long long n, long long d = 1) { return Rat(n, d); }

/// Parses "n", "-n/m" or a plain decimal like "0.25" into an exact rational.
inline Rat rat_from_string(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw parse_error("empty rational literal");
    auto bad = [&] { throw parse_error("invalid rational literal '" + text + "'"); };
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (num.empty() || den.empty()) bad();
        try {
            Rat r{BigInt(num), BigInt(den)};
            return r;
        } catch (...) {
            bad();
        }
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (fp.empty()) bad();
        bool neg = !ip.empty() && ip[0] == '-';
        try {
            BigInt whole = ip.empty() || ip == "-" || ip == "+" ? BigInt(0) : BigInt(ip);
            BigInt scale = 1;
            for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
            BigInt frac(fp);
            BigInt n = abs(whole) * scale + frac;
            if (neg) n = -n;
            return Rat(n, scale);
        } catch (...) {
            bad();
        }
    }
    try {
        return Rat(BigInt(s));
    } catch (...) {
        bad();
    }
    return Rat(); // unreachable
}

inline std::string to_string(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

/// Exact integer square root when n is a perfect square.
inline std::optional<BigInt> perfect_isqrt(const BigInt& n) {
    if (n < 0) return std::nullopt;
    BigInt r = sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

/// Exact square root of a rational, if it exists in Q. Negative input or a
/// non-square returns nullopt.
inline std::optional<Rat> rat_sqrt(const Rat& x) {
    auto n = perfect_isqrt(numerator(x));
    auto d = perfect_isqrt(denominator(x));
    if (!n || !d) return std::nullopt;
    return Rat(*n, *d);
}

/// Exact integer n-th root when it exists.
inline std::optional<BigInt> perfect_iroot(const BigInt& v, unsigned n) {
    if (n == 0) return std::nullopt;
    if (n == 1) return v;
    if (v < 0) {
        if (n % 2 == 0) return std::nullopt;
        auto r = perfect_iroot(-v, n);
        if (!r) return std::nullopt;
        return -*r;
    }
    if (v == 0 || v == 1) return v;
    // bracket by bit length, then binary search
    BigInt lo = 1, hi = BigInt(1) << static_cast<unsigned>(msb(v) / n + 2);
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        BigInt p = pow(mid, n);
        if (p <= v)
            lo = mid;
        else
            hi = mid - 1;
    }
    if (pow(lo, n) == v) return lo;
    return std::nullopt;
}

/// Exact n-th root of a rational when it exists in Q.
inline std::optional<Rat> rat_nth_root(const Rat& x, unsigned n) {
    auto a = perfect_iroot(numerator(x), n);
    auto b = perfect_iroot(denominator(x), n);
    if (!a || !b) return std::nullopt;
    return Rat(*a, *b);
}

inline Rat rat_pow(const Rat& x, int e) {
    if (e >= 0) return Rat(pow(numerator(x), unsigned(e)), pow(denominator(x), unsigned(e)));
    if (x == 0) throw internal_error("rat_pow: zero to negative power");
    return Rat(pow(denominator(x), unsigned(-e)), pow(numerator(x), unsigned(-e)));
}

inline BigInt factorial(int n) {
    if (n < 0) throw internal_error("factorial of negative argument");
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace offsetshape

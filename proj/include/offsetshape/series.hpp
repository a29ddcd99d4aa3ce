#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "offsetshape/coeff.hpp"
#include "offsetshape/errors.hpp"

namespace offsetshape {

/// Truncated univariate power series in h. Stores exactly `trunc`
/// coefficients; trunc is the first untrusted exponent, so every stored
/// coefficient (exponents 0..trunc-1) is trusted. Binary operations
/// propagate trunc pessimistically (min of the operands).
template <typename K>
class TruncSeries {
public:
    TruncSeries() = default;
    explicit TruncSeries(int trunc) : c_(static_cast<std::size_t>(check(trunc))) {}
    TruncSeries(std::vector<K> coeffs) : c_(std::move(coeffs)) {}

    static TruncSeries zero(int trunc) { return TruncSeries(trunc); }
    static TruncSeries constant(const K& v, int trunc) {
        TruncSeries s(trunc);
        if (trunc > 0) s.c_[0] = v;
        return s;
    }
    /// c * h^e, truncated at `trunc`.
    static TruncSeries monomial(const K& c, int e, int trunc) {
        TruncSeries s(trunc);
        if (e >= 0 && e < trunc) s.c_[static_cast<std::size_t>(e)] = c;
        return s;
    }

    int trunc() const { return static_cast<int>(c_.size()); }
    const K& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    K& coeff(int i) { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<K>& coeffs() const { return c_; }

    /// Magnitude reference for float-mode zero tests (max |coefficient|).
    K scale() const {
        K m{};
        for (const K& c : c_) m = std::max<K>(m, coeff_traits<K>::abs(c));
        return m;
    }

    bool is_zero_at(int i) const { return coeff_traits<K>::is_zero(c_[std::size_t(i)], scale()); }

    /// Least exponent with a (tolerance-aware) nonzero coefficient, or
    /// nullopt when every stored coefficient is zero (order >= trunc).
    std::optional<int> order() const {
        K sc = scale();
        for (int i = 0; i < trunc(); ++i)
            if (!coeff_traits<K>::is_zero(c_[std::size_t(i)], sc)) return i;
        return std::nullopt;
    }

    /// Restrict to a smaller trunc (never extends trust).
    TruncSeries truncated(int t) const {
        if (t >= trunc()) return *this;
        return TruncSeries(std::vector<K>(c_.begin(), c_.begin() + check(t)));
    }

    /// Extends the coefficient vector with zeros. Only valid when the caller
    /// knows the series exactly (e.g. a polynomial); trust is the caller's.
    TruncSeries extended_exact(int t) const {
        std::vector<K> v = c_;
        v.resize(static_cast<std::size_t>(std::max(t, trunc())), K{});
        return TruncSeries(std::move(v));
    }

    template <typename V>
    V evaluate(const V& h) const {
        V acc{};
        for (int i = trunc() - 1; i >= 0; --i) acc = acc * h + V(c_[std::size_t(i)]);
        return acc;
    }

private:
    static int check(int t) {
        if (t < 0) throw internal_error("TruncSeries: negative trunc");
        return t;
    }
    std::vector<K> c_;
};

template <typename K>
TruncSeries<K> add(const TruncSeries<K>& s, const TruncSeries<K>& t) {
    const int n = std::min(s.trunc(), t.trunc());
    TruncSeries<K> r(n);
    for (int i = 0; i < n; ++i) r.coeff(i) = s[i] + t[i];
    return r;
}

template <typename K>
TruncSeries<K> neg(const TruncSeries<K>& s) {
    TruncSeries<K> r(s.trunc());
    for (int i = 0; i < s.trunc(); ++i) r.coeff(i) = -s[i];
    return r;
}

template <typename K>
TruncSeries<K> sub(const TruncSeries<K>& s, const TruncSeries<K>& t) {
    return add(s, neg(t));
}

/// Cauchy product truncated at min(s.trunc, t.trunc).
template <typename K>
TruncSeries<K> mul(const TruncSeries<K>& s, const TruncSeries<K>& t) {
    const int n = std::min(s.trunc(), t.trunc());
    TruncSeries<K> r(n);
    for (int i = 0; i < std::min(s.trunc(), n); ++i) {
        if (coeff_traits<K>::exact && s[i] == K{}) continue;
        for (int j = 0; j < std::min(t.trunc(), n - i); ++j) r.coeff(i + j) += s[i] * t[j];
    }
    return r;
}

template <typename K>
TruncSeries<K> scale(const TruncSeries<K>& s, const K& c) {
    TruncSeries<K> r(s.trunc());
    for (int i = 0; i < s.trunc(); ++i) r.coeff(i) = c * s[i];
    return r;
}

/// Termwise derivative; one trusted coefficient is consumed.
template <typename K>
TruncSeries<K> differentiate(const TruncSeries<K>& s) {
    if (s.trunc() < 1) throw truncation_error("differentiate: empty series");
    TruncSeries<K> r(s.trunc() - 1);
    for (int i = 1; i < s.trunc(); ++i) r.coeff(i - 1) = coeff_traits<K>::from_int(i) * s[i];
    return r;
}

/// s = h^m * t with t(0) != 0; returns (m, t), t.trunc = s.trunc - m.
template <typename K>
std::pair<int, TruncSeries<K>> extract_monomial_factor(const TruncSeries<K>& s) {
    auto m = s.order();
    if (!m) throw truncation_error("extract_monomial_factor: series is zero within trunc");
    TruncSeries<K> t(s.trunc() - *m);
    for (int i = 0; i < t.trunc(); ++i) t.coeff(i) = s[*m + i];
    return {*m, t};
}

/// Multiplication by h^m (trunc grows with the shift; trust is preserved
/// because the new low-order coefficients are exactly zero).
template <typename K>
TruncSeries<K> shift_up(const TruncSeries<K>& s, int m) {
    TruncSeries<K> r(s.trunc() + m);
    for (int i = 0; i < s.trunc(); ++i) r.coeff(i + m) = s[i];
    return r;
}

/// Exact division by h^m; requires order >= m within trunc.
template <typename K>
TruncSeries<K> shift_down(const TruncSeries<K>& s, int m) {
    auto ord = s.order();
    if (s.trunc() < m) throw truncation_error("shift_down: trunc smaller than shift");
    for (int i = 0; i < m; ++i)
        if (!s.is_zero_at(i)) throw geometry_error("shift_down: nonzero low-order coefficient");
    TruncSeries<K> r(s.trunc() - m);
    for (int i = 0; i < r.trunc(); ++i) r.coeff(i) = s[i + m];
    (void)ord;
    return r;
}

/// Multiplicative inverse; requires a unit constant term.
template <typename K>
TruncSeries<K> inverse(const TruncSeries<K>& s) {
    if (s.trunc() < 1) throw truncation_error("inverse: empty series");
    if (s.is_zero_at(0)) throw geometry_error("inverse: constant term is zero (not a unit)");
    TruncSeries<K> r(s.trunc());
    const K inv0 = K(1) / s[0];
    r.coeff(0) = inv0;
    for (int n = 1; n < s.trunc(); ++n) {
        K acc{};
        for (int k = 1; k <= n && k < s.trunc(); ++k) acc += s[k] * r[n - k];
        r.coeff(n) = -inv0 * acc;
    }
    return r;
}

namespace detail {
inline std::optional<Rat> coeff_sqrt(const Rat& c) { return rat_sqrt(c); }
inline std::optional<double> coeff_sqrt(double c) {
    if (c < 0) return std::nullopt;
    return std::sqrt(c);
}
} // namespace detail

/// Square root with positive constant term. In exact mode the constant term
/// must be a perfect rational square.
template <typename K>
TruncSeries<K> sqrt_series(const TruncSeries<K>& s) {
    if (s.trunc() < 1) throw truncation_error("sqrt: empty series");
    if (s.is_zero_at(0) || s[0] < K{})
        throw geometry_error("sqrt: constant term must be strictly positive");
    auto r0 = detail::coeff_sqrt(s[0]);
    if (!r0) throw exactness_error("sqrt: constant term is not a perfect square in Q");
    TruncSeries<K> r(s.trunc());
    r.coeff(0) = *r0;
    const K half_inv = K(1) / (K(2) * *r0);
    for (int n = 1; n < s.trunc(); ++n) {
        K acc{};
        for (int k = 1; k < n; ++k) acc += r[k] * r[n - k];
        r.coeff(n) = (s[n] - acc) * half_inv;
    }
    return r;
}

/// r with r*r*s == 1 up to trunc; requires a strictly positive constant term
/// (a perfect square in exact mode).
template <typename K>
TruncSeries<K> inv_sqrt(const TruncSeries<K>& s) {
    if (s.trunc() < 1) throw truncation_error("inv_sqrt: empty series");
    if (s.is_zero_at(0) || s[0] < K{})
        throw geometry_error("inv_sqrt: constant term must be strictly positive (not a unit)");
    return inverse(sqrt_series(s));
}

/// f(g) for ord(g) >= 1. Result trusted to min(g.trunc, ord(g)*f.trunc).
template <typename K>
TruncSeries<K> compose(const TruncSeries<K>& f, const TruncSeries<K>& g) {
    if (g.trunc() < 1) throw truncation_error("compose: empty inner series");
    if (!g.is_zero_at(0)) throw geometry_error("compose: inner series must have zero constant term");
    int og = g.order().value_or(g.trunc());
    long long lim = static_cast<long long>(og) * f.trunc();
    int n = static_cast<int>(std::min<long long>(g.trunc(), lim));
    TruncSeries<K> acc(n), gn = TruncSeries<K>::constant(K(1), n);
    for (int i = 0; i < f.trunc(); ++i) {
        if (i > 0) {
            gn = mul(gn, g.truncated(n));
            if (gn.order() == std::nullopt && coeff_traits<K>::exact) break; // g^i vanished within trunc
        }
        if (!(coeff_traits<K>::exact && f[i] == K{})) acc = add(acc, scale(gn, f[i]));
    }
    return acc;
}

template <typename K>
bool equal_within_trunc(const TruncSeries<K>& s, const TruncSeries<K>& t) {
    const int n = std::min(s.trunc(), t.trunc());
    K sc = std::max<K>(s.scale(), t.scale());
    for (int i = 0; i < n; ++i)
        if (!coeff_traits<K>::is_zero(s[i] - t[i], sc)) return false;
    return true;
}

/// "3/5*h^2 - h^3 + O(h^6)" style rendering, mainly for reports and tests.
template <typename K>
std::string to_string(const TruncSeries<K>& s) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < s.trunc(); ++i) {
        if (s.is_zero_at(i)) continue;
        K c = s[i];
        bool negative = c < K{};
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        K a = coeff_traits<K>::abs(c);
        const bool unit = coeff_traits<K>::is_zero(a - K(1), K(1));
        if (i == 0) {
            os << coeff_traits<K>::str(a);
        } else {
            if (!unit) os << coeff_traits<K>::str(a) << "*";
            os << "h";
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    if (first) os << "0";
    os << " + O(h^" << s.trunc() << ")";
    return os.str();
}

} // namespace offsetshape

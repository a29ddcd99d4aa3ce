#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "offsetshape/coeff.hpp"
#include "offsetshape/errors.hpp"
#include "offsetshape/rational.hpp"

namespace offsetshape {

/// Dense univariate polynomial over K, lowest degree first.
template <typename K>
class UniPoly {
public:
    UniPoly() = default;
    UniPoly(std::vector<K> c) : c_(std::move(c)) { strip(); }
    static UniPoly zero() { return UniPoly(); }
    static UniPoly constant(const K& v) { return UniPoly(std::vector<K>{v}); }
    static UniPoly monomial(const K& v, int e) {
        std::vector<K> c(static_cast<std::size_t>(e) + 1);
        c.back() = v;
        return UniPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    const K& operator[](int i) const { return c_[std::size_t(i)]; }
    K coeff_or_zero(int i) const {
        return (i >= 0 && i <= degree()) ? c_[std::size_t(i)] : K{};
    }
    const std::vector<K>& coeffs() const { return c_; }
    const K& lead() const { return c_.back(); }

    K eval(const K& x) const {
        K acc{};
        for (int i = degree(); i >= 0; --i) acc = acc * x + c_[std::size_t(i)];
        return acc;
    }

    UniPoly derivative() const {
        if (degree() < 1) return zero();
        std::vector<K> d(c_.size() - 1);
        for (int i = 1; i <= degree(); ++i) d[std::size_t(i - 1)] = coeff_traits<K>::from_int(i) * c_[std::size_t(i)];
        return UniPoly(std::move(d));
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<K> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i < a.c_.size()) c[i] += a.c_[i];
            if (i < b.c_.size()) c[i] += b.c_[i];
        }
        return UniPoly(std::move(c));
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + b.scaled(K(-1)); }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        std::vector<K> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return UniPoly(std::move(c));
    }
    UniPoly scaled(const K& s) const {
        std::vector<K> c = c_;
        for (K& v : c) v = v * s;
        return UniPoly(std::move(c));
    }

    /// Euclidean division over a field: returns (quotient, remainder).
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& g) const {
        if (g.is_zero()) throw internal_error("UniPoly: division by zero");
        UniPoly r = *this;
        std::vector<K> q;
        if (degree() >= g.degree()) q.resize(std::size_t(degree() - g.degree()) + 1);
        while (!r.is_zero() && r.degree() >= g.degree()) {
            K f = r.lead() / g.lead();
            int sh = r.degree() - g.degree();
            q[std::size_t(sh)] = f;
            // r -= f * x^sh * g, with explicit leading cancellation
            std::vector<K> rc = r.c_;
            for (int i = 0; i <= g.degree(); ++i) rc[std::size_t(i + sh)] -= f * g[i];
            rc.pop_back();
            r = UniPoly(std::move(rc));
        }
        return {UniPoly(std::move(q)), r};
    }

    UniPoly monic() const {
        if (is_zero()) return *this;
        return scaled(K(1) / lead());
    }

private:
    void strip() {
        while (!c_.empty() && strip_test(c_.back())) c_.pop_back();
    }
    static bool strip_test(const K& v) {
        if constexpr (coeff_traits<K>::exact)
            return v == K{};
        else
            return v == K{}; // float polys strip only literal zeros; tolerance stays in root logic
    }
    std::vector<K> c_;
};

using QPoly = UniPoly<Rat>;

inline QPoly q_gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Yun's algorithm: f = prod_i out[i-1]^i with squarefree, pairwise coprime
/// factors (entries may be constants when a multiplicity is absent).
inline std::vector<QPoly> squarefree_decomposition(const QPoly& f) {
    std::vector<QPoly> out;
    if (f.degree() < 1) return out;
    QPoly a = q_gcd(f, f.derivative());
    QPoly b = f.divmod(a).first;
    QPoly c = f.derivative().divmod(a).first;
    QPoly d = c - b.derivative();
    while (true) {
        QPoly g = q_gcd(b, d);
        out.push_back(g.monic());
        b = b.divmod(g).first;
        if (b.degree() < 1) break;
        c = d.divmod(g).first;
        d = c - b.derivative();
    }
    return out;
}

namespace detail {

/// Divisors of |n| when n is small enough to enumerate; empty means "give up".
inline std::vector<BigInt> small_divisors(BigInt n) {
    std::vector<BigInt> divs;
    if (n < 0) n = -n;
    if (n == 0 || n > BigInt(1) << 48) return divs;
    for (BigInt i = 1; i * i <= n; ++i) {
        if (n % i == 0) {
            divs.push_back(i);
            if (i != n / i) divs.push_back(n / i);
        }
        if (divs.size() > 4096) return {};
    }
    return divs;
}

inline QPoly integerized_primitive(const QPoly& f) {
    BigInt den = 1;
    for (const Rat& c : f.coeffs()) den = lcm(den, denominator(c));
    std::vector<BigInt> ic;
    for (const Rat& c : f.coeffs()) ic.push_back(numerator(c) * (den / denominator(c)));
    BigInt g = 0;
    for (const BigInt& c : ic) g = gcd(g, c);
    if (g == 0) g = 1;
    std::vector<Rat> out;
    for (const BigInt& c : ic) out.emplace_back(c / g);
    return QPoly(std::move(out));
}

} // namespace detail

/// Exact rational roots of a squarefree f (via divisor enumeration), removed
/// from f by deflation. Returns the roots; f is replaced by the root-free part.
inline std::vector<Rat> extract_rational_roots(QPoly& f) {
    std::vector<Rat> roots;
    if (f.degree() < 1) return roots;
    // x = 0
    while (f.degree() >= 1 && f[0] == 0) {
        roots.emplace_back(0);
        f = f.divmod(QPoly({Rat(0), Rat(1)})).first;
        break; // squarefree: at most once
    }
    if (f.degree() < 1) return roots;
    QPoly zf = detail::integerized_primitive(f);
    auto ps = detail::small_divisors(numerator(zf[0]));
    auto qs = detail::small_divisors(numerator(zf.lead()));
    if (ps.empty() || qs.empty()) return roots; // too large to enumerate; treat as irrational
    for (const BigInt& p : ps)
        for (const BigInt& q : qs) {
            for (int sign = 0; sign < 2; ++sign) {
                Rat cand{sign ? -p : p, q};
                if (f.degree() >= 1 && f.eval(cand) == 0) {
                    roots.push_back(cand);
                    // deflate by (x - cand)
                    f = f.divmod(QPoly({-cand, Rat(1)})).first;
                }
            }
            if (f.degree() < 1) return roots;
        }
    return roots;
}

/// Sturm chain real-root machinery for the irrational leftovers.
class SturmChain {
public:
    explicit SturmChain(const QPoly& f) {
        QPoly a = f, b = f.derivative();
        chain_.push_back(a);
        while (!b.is_zero()) {
            chain_.push_back(b);
            QPoly r = a.divmod(b).second.scaled(Rat(-1));
            a = std::move(b);
            b = std::move(r);
        }
    }
    int sign_changes(const Rat& x) const {
        int prev = 0, changes = 0;
        for (const auto& p : chain_) {
            Rat v = p.eval(x);
            int s = v == 0 ? 0 : (v < 0 ? -1 : 1);
            if (s != 0) {
                if (prev != 0 && s != prev) ++changes;
                prev = s;
            }
        }
        return changes;
    }
    int count_in(const Rat& lo, const Rat& hi) const { return sign_changes(lo) - sign_changes(hi); }

private:
    std::vector<QPoly> chain_;
};

/// Cauchy bound: all real roots lie in (-B, B).
inline Rat root_bound(const QPoly& f) {
    Rat m = 0;
    for (int i = 0; i < f.degree(); ++i) m = std::max(m, coeff_traits<Rat>::abs(f[i] / f.lead()));
    return m + 1;
}

/// Isolating intervals, then bisection refinement to double precision.
inline std::vector<double> real_roots_approx(const QPoly& f) {
    std::vector<double> out;
    if (f.degree() < 1) return out;
    SturmChain sturm(f);
    Rat B = root_bound(f);
    struct Iv { Rat lo, hi; int n; };
    std::vector<Iv> work{{-B, B, sturm.count_in(-B, B)}}, isolated;
    while (!work.empty()) {
        Iv iv = work.back();
        work.pop_back();
        if (iv.n == 0) continue;
        if (iv.n == 1) {
            isolated.push_back(iv);
            continue;
        }
        Rat mid = (iv.lo + iv.hi) / 2;
        if (f.eval(mid) == 0) {
            isolated.push_back({mid, mid, 1});
            // nudge the halves off the root
            Rat eps = (iv.hi - iv.lo) / 1024;
            work.push_back({iv.lo, mid - eps, sturm.count_in(iv.lo, mid - eps)});
            work.push_back({mid + eps, iv.hi, sturm.count_in(mid + eps, iv.hi)});
        } else {
            work.push_back({iv.lo, mid, sturm.count_in(iv.lo, mid)});
            work.push_back({mid, iv.hi, sturm.count_in(mid, iv.hi)});
        }
    }
    for (auto& iv : isolated) {
        Rat lo = iv.lo, hi = iv.hi;
        if (lo != hi) {
            bool neg_lo = f.eval(lo) < 0;
            for (int step = 0; step < 120 && hi - lo > 0; ++step) {
                Rat mid = (lo + hi) / 2;
                Rat v = f.eval(mid);
                if (v == 0) {
                    lo = hi = mid;
                    break;
                }
                if ((v < 0) == neg_lo)
                    lo = mid;
                else
                    hi = mid;
            }
        }
        out.push_back(to_double((lo + hi) / 2));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// A real root of a rational polynomial: exact when representable in Q.
struct RealRoot {
    std::optional<Rat> exact;
    double approx = 0.0;
    int multiplicity = 1;
};

/// All real roots of f with multiplicities; rational ones exact, the rest
/// isolated by Sturm bisection and reported as doubles.
inline std::vector<RealRoot> real_roots(const QPoly& f) {
    std::vector<RealRoot> out;
    if (f.degree() < 1) return out;
    auto sq = squarefree_decomposition(f);
    for (std::size_t i = 0; i < sq.size(); ++i) {
        QPoly g = sq[i];
        if (g.degree() < 1) continue;
        int mult = static_cast<int>(i) + 1;
        for (const Rat& r : extract_rational_roots(g))
            out.push_back({r, to_double(r), mult});
        for (double r : real_roots_approx(g))
            out.push_back({std::nullopt, r, mult});
    }
    std::sort(out.begin(), out.end(), [](const RealRoot& a, const RealRoot& b) { return a.approx < b.approx; });
    return out;
}

/// Durand-Kerner real-root extraction for float-mode polynomials.
inline std::vector<RealRoot> real_roots(const UniPoly<double>& f) {
    std::vector<RealRoot> out;
    int n = f.degree();
    if (n < 1) return out;
    using C = std::complex<double>;
    std::vector<C> a(f.coeffs().begin(), f.coeffs().end());
    for (auto& c : a) c /= f.lead();
    std::vector<C> z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) z[std::size_t(i)] = std::pow(C(0.4, 0.9), i + 1);
    auto peval = [&](C x) {
        C acc = 0;
        for (int i = n; i >= 0; --i) acc = acc * x + a[std::size_t(i)];
        return acc;
    };
    for (int it = 0; it < 300; ++it) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            C denom = 1;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= z[std::size_t(i)] - z[std::size_t(j)];
            C step = peval(z[std::size_t(i)]) / denom;
            z[std::size_t(i)] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14) break;
    }
    double scale = 0;
    for (auto& c : a) scale = std::max(scale, std::abs(c));
    std::vector<double> reals;
    for (auto& zz : z)
        if (std::abs(zz.imag()) < 1e-7 * (1 + std::abs(zz.real()))) reals.push_back(zz.real());
    std::sort(reals.begin(), reals.end());
    // cluster near-equal values into multiplicities
    for (std::size_t i = 0; i < reals.size();) {
        std::size_t j = i + 1;
        while (j < reals.size() && std::fabs(reals[j] - reals[i]) < 1e-6 * (1 + std::fabs(reals[i]))) ++j;
        double avg = 0;
        for (std::size_t k = i; k < j; ++k) avg += reals[k];
        avg /= static_cast<double>(j - i);
        out.push_back({std::nullopt, avg, static_cast<int>(j - i)});
        i = j;
    }
    (void)scale;
    return out;
}

} // namespace offsetshape

#pragma once

#include <climits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "offsetshape/series.hpp"
#include "offsetshape/unipoly.hpp"

namespace offsetshape {

/// Sparse bivariate polynomial over K; no zero coefficients are stored.
template <typename K>
class Poly2 {
public:
    using Key = std::pair<int, int>; // (degx, degy)

    Poly2() = default;

    static Poly2 constant(const K& v) {
        Poly2 p;
        p.set(0, 0, v);
        return p;
    }
    static Poly2 monomial(const K& v, int dx, int dy) {
        Poly2 p;
        p.set(dx, dy, v);
        return p;
    }
    static Poly2 var_x() { return monomial(K(1), 1, 0); }
    static Poly2 var_y() { return monomial(K(1), 0, 1); }

    bool is_zero() const { return t_.empty(); }
    const std::map<Key, K>& terms() const { return t_; }

    K coeff(int dx, int dy) const {
        auto it = t_.find({dx, dy});
        return it == t_.end() ? K{} : it->second;
    }
    void set(int dx, int dy, const K& v) {
        if (v == K{})
            t_.erase({dx, dy});
        else
            t_[{dx, dy}] = v;
    }
    void add_term(int dx, int dy, const K& v) {
        auto it = t_.find({dx, dy});
        if (it == t_.end()) {
            if (!(v == K{})) t_[{dx, dy}] = v;
        } else {
            it->second += v;
            if (it->second == K{}) t_.erase(it);
        }
    }

    int total_degree() const {
        int d = -1;
        for (auto& [k, v] : t_) d = std::max(d, k.first + k.second);
        return d;
    }
    int deg_x() const {
        int d = -1;
        for (auto& [k, v] : t_) d = std::max(d, k.first);
        return d;
    }
    int deg_y() const {
        int d = -1;
        for (auto& [k, v] : t_) d = std::max(d, k.second);
        return d;
    }

    friend Poly2 operator+(const Poly2& a, const Poly2& b) {
        Poly2 r = a;
        for (auto& [k, v] : b.t_) r.add_term(k.first, k.second, v);
        return r;
    }
    friend Poly2 operator-(const Poly2& a, const Poly2& b) {
        Poly2 r = a;
        for (auto& [k, v] : b.t_) r.add_term(k.first, k.second, -v);
        return r;
    }
    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 r;
        for (auto& [ka, va] : a.t_)
            for (auto& [kb, vb] : b.t_) r.add_term(ka.first + kb.first, ka.second + kb.second, va * vb);
        return r;
    }
    Poly2 scaled(const K& s) const {
        Poly2 r;
        if (s == K{}) return r;
        for (auto& [k, v] : t_) r.t_[k] = v * s;
        return r;
    }
    Poly2 pow(int e) const {
        Poly2 r = constant(K(1));
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    Poly2 dx() const {
        Poly2 r;
        for (auto& [k, v] : t_)
            if (k.first > 0) r.add_term(k.first - 1, k.second, coeff_traits<K>::from_int(k.first) * v);
        return r;
    }
    Poly2 dy() const {
        Poly2 r;
        for (auto& [k, v] : t_)
            if (k.second > 0) r.add_term(k.first, k.second - 1, coeff_traits<K>::from_int(k.second) * v);
        return r;
    }

    template <typename V>
    V eval(const V& x, const V& y) const {
        // Horner in y with x-Horner per coefficient
        int dy_max = deg_y();
        V acc{};
        for (int j = dy_max; j >= 0; --j) {
            V cx{};
            int dx_max = -1;
            for (auto& [k, v] : t_)
                if (k.second == j) dx_max = std::max(dx_max, k.first);
            for (int i = dx_max; i >= 0; --i) {
                auto it = t_.find({i, j});
                cx = cx * x + (it == t_.end() ? V{} : V(it->second));
            }
            acc = acc * y + cx;
        }
        return acc;
    }

    /// Substitutes truncated series for x and y.
    TruncSeries<K> eval_series(const TruncSeries<K>& X, const TruncSeries<K>& Y) const {
        const int T = std::min(X.trunc(), Y.trunc());
        TruncSeries<K> acc(T);
        const int dym = deg_y();
        for (int j = dym; j >= 0; --j) {
            TruncSeries<K> cx(T);
            int dxm = -1;
            for (auto& [k, v] : t_)
                if (k.second == j) dxm = std::max(dxm, k.first);
            for (int i = dxm; i >= 0; --i) {
                cx = mul(cx, X);
                auto it = t_.find({i, j});
                if (it != t_.end()) cx = add(cx, TruncSeries<K>::constant(it->second, T));
            }
            acc = add(mul(acc, Y), cx);
        }
        return acc;
    }

    /// f(x + cx, y + cy)
    Poly2 translated(const K& cx, const K& cy) const {
        Poly2 X = var_x() + constant(cx);
        Poly2 Y = var_y() + constant(cy);
        return substituted(X, Y);
    }

    Poly2 substituted(const Poly2& X, const Poly2& Y) const {
        // Horner in y, then x
        int dym = deg_y();
        Poly2 acc;
        for (int j = dym; j >= 0; --j) {
            Poly2 cx;
            int dxm = -1;
            for (auto& [k, v] : t_)
                if (k.second == j) dxm = std::max(dxm, k.first);
            for (int i = dxm; i >= 0; --i) {
                cx = cx * X;
                auto it = t_.find({i, j});
                if (it != t_.end()) cx = cx + constant(it->second);
            }
            acc = acc * Y + cx;
        }
        return acc;
    }

    Poly2 swapped_xy() const {
        Poly2 r;
        for (auto& [k, v] : t_) r.t_[{k.second, k.first}] = v;
        return r;
    }
    Poly2 mirrored_x() const {
        Poly2 r;
        for (auto& [k, v] : t_) r.t_[k] = (k.first % 2 ? -v : v);
        return r;
    }

    /// Coefficients as polynomials in x, indexed by y-degree.
    std::vector<UniPoly<K>> y_coefficients() const {
        std::vector<std::vector<K>> rows(static_cast<std::size_t>(deg_y()) + 1);
        for (auto& [k, v] : t_) {
            auto& row = rows[std::size_t(k.second)];
            if (static_cast<int>(row.size()) <= k.first) row.resize(std::size_t(k.first) + 1);
            row[std::size_t(k.first)] = v;
        }
        std::vector<UniPoly<K>> out;
        for (auto& row : rows) out.emplace_back(std::move(row));
        return out;
    }
    static Poly2 from_y_coefficients(const std::vector<UniPoly<K>>& rows) {
        Poly2 r;
        for (std::size_t j = 0; j < rows.size(); ++j)
            for (int i = 0; i <= rows[j].degree(); ++i) r.add_term(i, static_cast<int>(j), rows[j][i]);
        return r;
    }

    UniPoly<K> at_y_zero() const {
        std::vector<K> c;
        for (auto& [k, v] : t_)
            if (k.second == 0) {
                if (static_cast<int>(c.size()) <= k.first) c.resize(std::size_t(k.first) + 1);
                c[std::size_t(k.first)] = v;
            }
        return UniPoly<K>(std::move(c));
    }

    /// Drops every term with x-degree >= cap (sound when only information
    /// below the cap is consumed downstream).
    Poly2 x_truncated(int cap) const {
        Poly2 r;
        for (auto& [k, v] : t_)
            if (k.first < cap) r.t_[k] = v;
        return r;
    }

    /// Largest k with x^k | f   (f nonzero).
    int x_order() const {
        int m = INT_MAX;
        for (auto& [k, v] : t_) m = std::min(m, k.first);
        return m;
    }
    int y_order() const {
        int m = INT_MAX;
        for (auto& [k, v] : t_) m = std::min(m, k.second);
        return m;
    }
    Poly2 x_shifted_down(int m) const {
        Poly2 r;
        for (auto& [k, v] : t_) r.t_[{k.first - m, k.second}] = v;
        return r;
    }
    Poly2 y_shifted_down(int m) const {
        Poly2 r;
        for (auto& [k, v] : t_) r.t_[{k.first, k.second - m}] = v;
        return r;
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // highest total degree first, deterministic
        std::vector<std::pair<Key, K>> items(t_.begin(), t_.end());
        std::sort(items.begin(), items.end(), [](auto& a, auto& b) {
            int ta = a.first.first + a.first.second, tb = b.first.first + b.first.second;
            if (ta != tb) return ta > tb;
            return a.first > b.first;
        });
        for (auto& [k, v] : items) {
            bool negative = v < K{};
            K a = coeff_traits<K>::abs(v);
            if (first)
                os << (negative ? "-" : "");
            else
                os << (negative ? " - " : " + ");
            bool unit = (a == K(1)) && (k.first + k.second > 0);
            if (!unit) os << coeff_traits<K>::str(a);
            if (k.first > 0) {
                if (!unit) os << "*";
                os << "x";
                if (k.first > 1) os << "^" << k.first;
            }
            if (k.second > 0) {
                if (!unit || k.first > 0) os << "*";
                os << "y";
                if (k.second > 1) os << "^" << k.second;
            }
            first = false;
        }
        return os.str();
    }

private:
    std::map<Key, K> t_;
};

using QPoly2 = Poly2<Rat>;

/// Exact division in Q[x,y]; nullopt when g does not divide f.
inline std::optional<QPoly2> divide_exact(const QPoly2& f, const QPoly2& g) {
    if (g.is_zero()) return std::nullopt;
    QPoly2 r = f, q;
    // leading term of g under (degy, degx) lex
    auto lead_of = [](const QPoly2& p) {
        QPoly2::Key best{-1, -1};
        Rat c;
        for (auto& [k, v] : p.terms()) {
            auto key = std::make_pair(k.second, k.first);
            if (key > std::make_pair(best.second, best.first)) {
                best = k;
                c = v;
            }
        }
        return std::make_pair(best, c);
    };
    auto [gk, gc] = lead_of(g);
    while (!r.is_zero()) {
        auto [rk, rc] = lead_of(r);
        int dx = rk.first - gk.first, dy = rk.second - gk.second;
        if (dx < 0 || dy < 0) return std::nullopt;
        Rat f0 = rc / gc;
        q.add_term(dx, dy, f0);
        r = r - g * QPoly2::monomial(f0, dx, dy);
    }
    return q;
}

namespace detail {

inline QPoly content_of_rows(const std::vector<QPoly>& rows) {
    QPoly c = QPoly::zero();
    for (auto& r : rows) {
        c = q_gcd(c, r);
        if (c.degree() == 0) break;
    }
    return c;
}

} // namespace detail

/// gcd of f and g viewed as polynomials in y over Q(x) (primitive PRS),
/// returned primitive in y with content 1.
inline QPoly2 gcd_y(const QPoly2& f, const QPoly2& g) {
    if (f.is_zero()) return g;
    if (g.is_zero()) return f;
    auto prim = [](QPoly2 p) {
        auto rows = p.y_coefficients();
        QPoly cont = detail::content_of_rows(rows);
        if (cont.degree() >= 1) {
            std::vector<QPoly> out;
            for (auto& r : rows) out.push_back(r.divmod(cont).first);
            p = QPoly2::from_y_coefficients(out);
        }
        return p;
    };
    QPoly2 a = prim(f), b = prim(g);
    if (a.deg_y() < b.deg_y()) std::swap(a, b);
    while (!b.is_zero() && b.deg_y() >= 1) {
        // pseudo-remainder of a by b in y
        auto arows = a.y_coefficients();
        auto brows = b.y_coefficients();
        QPoly blead = brows.back();
        int da = a.deg_y(), db = b.deg_y();
        QPoly2 blead2 = QPoly2::from_y_coefficients({blead});
        QPoly2 rem = a;
        for (int k = da; k >= db; --k) {
            auto rrows = rem.y_coefficients();
            if (static_cast<int>(rrows.size()) - 1 < k) continue;
            QPoly rl = rrows[std::size_t(k)];
            if (rl.is_zero()) continue;
            // rem = blead * rem - rl * y^{k-db} * b
            QPoly2 t1 = blead2 * rem;
            QPoly2 t2 = QPoly2::from_y_coefficients({rl}) * b;
            // shift t2 up by (k-db) in y
            QPoly2 t2s;
            for (auto& [kk, vv] : t2.terms()) t2s.add_term(kk.first, kk.second + (k - db), vv);
            rem = t1 - t2s;
        }
        rem = prim(rem);
        a = std::move(b);
        b = std::move(rem);
    }
    if (!b.is_zero()) return QPoly2::constant(Rat(1)); // nonzero content-free constant in y
    return prim(a);
}

struct SquarefreeResult {
    QPoly2 poly;
    bool reduced = false;
};

/// Square-free part of f in Q[x,y]: y-content (univariate in x) is Yun-reduced
/// and the primitive part is divided by gcd_y(pp, d pp/dy).
inline SquarefreeResult squarefree_part(const QPoly2& f) {
    SquarefreeResult out{f, false};
    if (f.is_zero()) return out;
    auto rows = f.y_coefficients();
    QPoly cont = detail::content_of_rows(rows);
    QPoly2 pp = f;
    if (cont.degree() >= 1) {
        std::vector<QPoly> prows;
        for (auto& r : rows) prows.push_back(r.divmod(cont).first);
        pp = QPoly2::from_y_coefficients(prows);
    } else {
        cont = QPoly::constant(Rat(1));
    }
    // squarefree part of the univariate content
    QPoly cont_sf = QPoly::constant(Rat(1));
    if (cont.degree() >= 1) {
        auto dec = squarefree_decomposition(cont);
        for (auto& fac : dec)
            if (fac.degree() >= 1) cont_sf = cont_sf * fac;
        if (cont_sf.degree() != cont.degree()) out.reduced = true;
    }
    QPoly2 result;
    if (pp.deg_y() >= 1) {
        QPoly2 g = gcd_y(pp, pp.dy());
        if (g.deg_y() >= 1 || g.deg_x() >= 1) {
            auto q = divide_exact(pp, g);
            if (!q) throw internal_error("squarefree_part: non-exact division by gcd");
            pp = *q;
            out.reduced = true;
        }
    }
    result = pp * QPoly2::from_y_coefficients({cont_sf});
    out.poly = result;
    return out;
}

} // namespace offsetshape

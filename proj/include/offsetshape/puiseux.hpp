#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "offsetshape/parse.hpp"
#include "offsetshape/place.hpp"
#include "offsetshape/poly2.hpp"

namespace offsetshape {

namespace puiseux_detail {

/// One expansion branch of f(x,y)=0: x = t^ram, y = sum y[k] t^k with the
/// coefficients trusted for exponents < tbudget.
template <typename F>
struct InnerBranch {
    int ram = 1;
    std::vector<F> y;
    int tbudget = 0;
    bool exact_tail = false;
    // first Newton step, kept for conjugate-pair detection when the tail is
    // out of budget
    int first_exp = 0;
    F first_coeff{};
};

template <typename F>
struct Expansion {
    std::vector<InnerBranch<F>> main;
    std::vector<InnerBranch<double>> approx; // continued in float (exact mode only)
};

struct Segment {
    int u = 0, v = 1;                     // exponent gamma = u/v in lowest terms
    std::vector<std::pair<int, int>> pts; // support points on the edge
};

/// Lower-left Newton polygon edges between the y-axis anchor and the x-axis
/// anchor, by gift wrapping with exact slope comparison.
template <typename F>
std::vector<Segment> newton_segments(const Poly2<F>& f) {
    std::vector<std::pair<int, int>> pts;
    for (auto& [k, v] : f.terms()) pts.push_back(k);
    std::vector<Segment> segs;
    int n0 = INT_MAX, m0 = INT_MAX;
    for (auto& [i, j] : pts) {
        if (i == 0) n0 = std::min(n0, j);
        if (j == 0) m0 = std::min(m0, i);
    }
    if (n0 == INT_MAX || m0 == INT_MAX)
        throw internal_error("newton_segments: axis components not removed");
    if (n0 == 0) return segs; // f(0,0) != 0: nothing through the origin
    std::pair<int, int> cur{0, n0};
    while (cur.second > 0) {
        std::pair<int, int> best{-1, -1};
        long long bu = 0, bv = 1;
        for (auto& p : pts) {
            if (p.first <= cur.first || p.second >= cur.second) continue;
            long long du = p.first - cur.first;
            long long dv = cur.second - p.second;
            if (best.first < 0 || du * bv < bu * dv ||
                (du * bv == bu * dv && p.first > best.first)) {
                best = p;
                bu = du;
                bv = dv;
            }
        }
        if (best.first < 0) throw internal_error("newton_segments: polygon walk failed");
        Segment s;
        long long g = std::gcd(bu, bv);
        s.u = static_cast<int>(bu / g);
        s.v = static_cast<int>(bv / g);
        for (auto& p : pts) {
            long long di = p.first - cur.first, dj = p.second - cur.second;
            if (di >= 0 && dj <= 0 && di * bv == -dj * bu && p.second >= best.second)
                s.pts.push_back(p);
        }
        std::sort(s.pts.begin(), s.pts.end(), [](auto& a, auto& b) { return a.second < b.second; });
        segs.push_back(std::move(s));
        cur = best;
    }
    return segs;
}

/// Characteristic polynomial of a segment: Phi(T) = sum c_ij T^{j - jmin}.
template <typename F>
UniPoly<F> characteristic(const Poly2<F>& f, const Segment& s) {
    int jmin = s.pts.front().second;
    std::vector<F> c(static_cast<std::size_t>(s.pts.back().second - jmin) + 1);
    for (auto& p : s.pts) c[std::size_t(p.second - jmin)] = f.coeff(p.first, p.second);
    return UniPoly<F>(std::move(c));
}

/// f(x^v, x^u (c + y)) / x^N with N the minimal weighted order, x-truncated
/// below xcap.
template <typename F>
Poly2<F> segment_substitute(const Poly2<F>& f, int u, int v, const F& c, int xcap) {
    long long N = LLONG_MAX;
    for (auto& [k, val] : f.terms())
        N = std::min(N, static_cast<long long>(k.first) * v + static_cast<long long>(k.second) * u);
    const int djm = f.deg_y();
    std::vector<std::vector<F>> binom(static_cast<std::size_t>(djm) + 1);
    for (int n = 0; n <= djm; ++n) {
        binom[std::size_t(n)].resize(std::size_t(n) + 1);
        for (int k = 0; k <= n; ++k)
            binom[std::size_t(n)][std::size_t(k)] =
                (k == 0 || k == n)
                    ? F(1)
                    : binom[std::size_t(n - 1)][std::size_t(k - 1)] + binom[std::size_t(n - 1)][std::size_t(k)];
    }
    std::vector<F> cpow(static_cast<std::size_t>(djm) + 1);
    cpow[0] = F(1);
    for (int k = 1; k <= djm; ++k) cpow[std::size_t(k)] = cpow[std::size_t(k - 1)] * c;
    Poly2<F> out;
    for (auto& [k, val] : f.terms()) {
        long long w =
            static_cast<long long>(k.first) * v + static_cast<long long>(k.second) * u - N;
        if (w >= xcap) continue;
        for (int t = 0; t <= k.second; ++t) {
            F coef = val * binom[std::size_t(k.second)][std::size_t(t)] * cpow[std::size_t(k.second - t)];
            out.add_term(static_cast<int>(w), t, coef);
        }
    }
    return out;
}

template <typename F>
int x_order_tol(const UniPoly<F>& t0) {
    if constexpr (coeff_traits<F>::exact) {
        for (int i = 0; i <= t0.degree(); ++i)
            if (!(t0[i] == F{})) return i;
    } else {
        F sc{};
        for (int i = 0; i <= t0.degree(); ++i) sc = std::max<F>(sc, coeff_traits<F>::abs(t0[i]));
        for (int i = 0; i <= t0.degree(); ++i)
            if (!coeff_traits<F>::is_zero(t0[i], sc)) return i;
    }
    return -1;
}

/// Coefficient-by-coefficient lifting once the root is simple:
/// g(0,0)=0, dg/dy(0,0) != 0. Returns y(x) trusted below `budget` plus an
/// exactness flag (true when the tail is identically zero).
template <typename F>
std::pair<std::vector<F>, bool> lift_regular(Poly2<F> g, int budget) {
    std::vector<F> S(static_cast<std::size_t>(std::max(budget, 0)));
    const F gy0 = g.dy().coeff(0, 0);
    if (coeff_traits<F>::is_zero(gy0, F(1)))
        throw internal_error("lift_regular: dg/dy vanishes at the origin");
    g = g.x_truncated(budget);
    for (;;) {
        UniPoly<F> t0 = g.at_y_zero();
        int k = x_order_tol(t0);
        if (k < 0) return {S, true};
        if (k == 0) throw internal_error("lift_regular: constant term survived");
        if (k >= budget) return {S, false};
        F c1 = -t0[k] / gy0;
        S[std::size_t(k)] = c1;
        Poly2<F> Y = Poly2<F>::var_y() + Poly2<F>::monomial(c1, k, 0);
        g = g.substituted(Poly2<F>::var_x(), Y).x_truncated(budget);
    }
}

/// Composes an inner branch through the outer substitution
/// x = x1^v, y = x1^u (c + y1).
template <typename F>
InnerBranch<F> compose_branch(int u, int v, const F& c, const InnerBranch<F>& sub) {
    InnerBranch<F> b;
    b.ram = v * sub.ram;
    const int shift = u * sub.ram;
    b.tbudget = shift + sub.tbudget;
    b.exact_tail = sub.exact_tail;
    b.y.assign(static_cast<std::size_t>(b.tbudget), F{});
    if (shift < b.tbudget) b.y[std::size_t(shift)] = c;
    for (int k = 0; k < static_cast<int>(sub.y.size()); ++k)
        if (!(sub.y[std::size_t(k)] == F{})) {
            int e = shift + k;
            if (e < b.tbudget) b.y[std::size_t(e)] += sub.y[std::size_t(k)];
        }
    b.first_exp = shift;
    b.first_coeff = c;
    return b;
}

template <typename F>
InnerBranch<F> lifted_branch(const Poly2<F>& f1, int u, int v, const F& c, int inner_budget) {
    auto [S, exact] = lift_regular(f1, inner_budget);
    InnerBranch<F> b;
    b.ram = v;
    b.tbudget = u + inner_budget;
    b.exact_tail = exact;
    b.y.assign(static_cast<std::size_t>(b.tbudget), F{});
    b.y[std::size_t(u)] = c;
    for (int k = 1; k < inner_budget; ++k)
        if (!(S[std::size_t(k)] == F{})) b.y[std::size_t(u + k)] = S[std::size_t(k)];
    b.first_exp = u;
    b.first_coeff = c;
    return b;
}

template <typename F>
InnerBranch<F> stub_branch(int u, int v, const F& c, int budget) {
    InnerBranch<F> b;
    b.ram = v;
    b.y.assign(static_cast<std::size_t>(budget), F{});
    if (u < budget) b.y[std::size_t(u)] = c;
    b.tbudget = budget;
    b.first_exp = u;
    b.first_coeff = c;
    return b;
}

constexpr int kDepthCap = 64;

template <typename F>
Expansion<F> expand(Poly2<F> f, int budget, int depth);

template <typename F>
void expand_root(Expansion<F>& out, const Poly2<F>& f, const Segment& seg, const F& c, int mult,
                 int budget, int depth) {
    const int u = seg.u, v = seg.v;
    const int inner_budget = budget - u;
    if (inner_budget <= 0) {
        out.main.push_back(stub_branch(u, v, c, budget));
        return;
    }
    Poly2<F> f1 = segment_substitute(f, u, v, c, inner_budget);
    if (mult == 1) {
        out.main.push_back(lifted_branch(f1, u, v, c, inner_budget));
        return;
    }
    Expansion<F> sub = expand(f1, inner_budget, depth + 1);
    for (auto& sb : sub.main) out.main.push_back(compose_branch(u, v, c, sb));
    if constexpr (coeff_traits<F>::exact) {
        const double cd = to_double(c);
        for (auto& sb : sub.approx) out.approx.push_back(compose_branch(u, v, cd, sb));
    }
}

/// Recursive Newton-polygon expansion over F. Only real characteristic roots
/// are lifted; over Rat, irrational roots switch the branch to the double
/// engine (collected in Expansion::approx).
template <typename F>
Expansion<F> expand(Poly2<F> f, int budget, int depth) {
    Expansion<F> out;
    if (depth > kDepthCap)
        throw truncation_error("branch separation did not stabilize; raise trunc or check the input");
    if (budget <= 0 || f.is_zero()) return out;
    if (f.y_order() > 0) {
        InnerBranch<F> b; // terminating branch y = 0 (exact)
        b.ram = 1;
        b.tbudget = budget;
        b.exact_tail = true;
        out.main.push_back(std::move(b));
        f = f.y_shifted_down(f.y_order());
    }
    if (f.is_zero()) return out;
    if (f.x_order() > 0) f = f.x_shifted_down(f.x_order());
    f = f.x_truncated(std::max(budget, 1));
    if (f.deg_y() < 1) return out;
    if (!coeff_traits<F>::is_zero(f.coeff(0, 0), F(1))) return out;
    for (const Segment& seg : newton_segments(f)) {
        if (seg.u >= budget) {
            out.main.push_back(stub_branch<F>(seg.u, seg.v, F{}, budget));
            continue;
        }
        UniPoly<F> phi = characteristic(f, seg);
        for (const RealRoot& root : real_roots(phi)) {
            if constexpr (coeff_traits<F>::exact) {
                if (root.exact) {
                    if (*root.exact == 0) continue;
                    expand_root(out, f, seg, *root.exact, root.multiplicity, budget, depth);
                } else {
                    // irrational root: continue this branch in float arithmetic
                    Poly2<double> fd = convert_poly<double>(f);
                    Expansion<double> dsub;
                    expand_root(dsub, fd, seg, root.approx, root.multiplicity, budget, depth);
                    for (auto& b : dsub.main) out.approx.push_back(std::move(b));
                }
            } else {
                if (std::fabs(root.approx) < 1e-12) continue;
                expand_root(out, f, seg, root.approx, root.multiplicity, budget, depth);
            }
        }
    }
    return out;
}

/// Conjugate real series of one cycle differ by t -> -t; keep one per cycle.
template <typename F>
void dedup_conjugates(std::vector<InnerBranch<F>>& bs) {
    auto close = [](const F& a, const F& b) {
        if constexpr (coeff_traits<F>::exact)
            return a == b;
        else
            return std::fabs(a - b) <= 1e-9 * (1 + std::fabs(a));
    };
    auto flipped_equal = [&](const InnerBranch<F>& a, const InnerBranch<F>& b) {
        if (a.ram != b.ram || a.first_exp != b.first_exp) return false;
        if (!close(a.first_coeff, (a.first_exp % 2 ? F(-b.first_coeff) : b.first_coeff))) return false;
        int n = std::min({static_cast<int>(a.y.size()), static_cast<int>(b.y.size()),
                          std::min(a.tbudget, b.tbudget)});
        for (int k = 0; k < n; ++k)
            if (!close(a.y[std::size_t(k)], (k % 2 ? F(-b.y[std::size_t(k)]) : b.y[std::size_t(k)])))
                return false;
        return true;
    };
    std::vector<InnerBranch<F>> kept;
    for (auto& b : bs) {
        bool dup = false;
        if (b.ram % 2 == 0)
            for (auto& k : kept)
                if (k.ram % 2 == 0 && flipped_equal(k, b)) {
                    dup = true;
                    break;
                }
        if (!dup) kept.push_back(std::move(b));
    }
    bs = std::move(kept);
}

/// Raw branch in the original frame: (x, y) = (X(t), Y(t)).
template <typename K>
struct RawPlace {
    TruncSeries<K> X, Y;
    bool exact = false;
};

/// Rotates/reparametrizes a raw branch into standard form (h^p, beta_q h^q + ...)
/// with unit positive leading x-coefficient. Throws exactness_error when the
/// rotation or the reparametrization root is irrational in exact mode.
template <typename K>
Place<K> standardize_raw(const RawPlace<K>& raw, const std::pair<K, K>& center) {
    const auto& X = raw.X;
    const auto& Y = raw.Y;
    auto ox = X.order(), oy = Y.order();
    if (!ox && !oy)
        throw geometry_error("standardize: both coordinates vanish (a point, not a place)");
    const int p = std::min(ox.value_or(INT_MAX), oy.value_or(INT_MAX));
    const K wx = (ox && *ox == p) ? X[p] : K{};
    const K wy = (oy && *oy == p) ? Y[p] : K{};
    K rho2 = wx * wx + wy * wy;
    K rho;
    if constexpr (coeff_traits<K>::exact) {
        auto r = rat_sqrt(rho2);
        if (!r) throw exactness_error("standardize: tangent rotation is irrational");
        rho = *r;
    } else {
        rho = std::sqrt(rho2);
    }
    const K c = wx / rho, s = wy / rho;
    TruncSeries<K> Xs = add(scale(X, c), scale(Y, s));
    TruncSeries<K> Ys = add(scale(X, K(-s)), scale(Y, c));
    auto oys = Ys.order();
    if (!oys) {
        if (raw.exact) throw geometry_error("standardize: branch is a straight line");
        throw truncation_error("standardize: ord_y not visible within trunc; raise trunc");
    }
    if (*oys <= p) throw internal_error("standardize: rotation failed to separate orders");

    const int T = std::min(Xs.trunc(), Ys.trunc());
    TruncSeries<K> ynew = Ys.truncated(T);
    bool need_reparam = !(Xs[p] == K(1));
    for (int k = p + 1; k < Xs.trunc() && !need_reparam; ++k)
        if (!Xs.is_zero_at(k)) need_reparam = true;
    if (need_reparam) {
        // t(sigma) = sigma * v(sigma) with Xs(t(sigma)) = sigma^p
        TruncSeries<K> w = shift_down(Xs, p);
        const int Tw = w.trunc();
        if (Tw < 1) throw truncation_error("standardize: trunc too small to reparametrize");
        K v0;
        if constexpr (coeff_traits<K>::exact) {
            auto root = rat_nth_root(Rat(1) / w[0], static_cast<unsigned>(p));
            if (!root) throw exactness_error("standardize: reparametrization root is irrational");
            v0 = *root;
        } else {
            if (!(w[0] > 0)) throw geometry_error("standardize: nonpositive leading coefficient");
            v0 = std::pow(1.0 / w[0], 1.0 / p);
        }
        TruncSeries<K> v = TruncSeries<K>::constant(v0, Tw);
        const TruncSeries<K> wp = differentiate(w).extended_exact(Tw);
        bool converged = false;
        for (int it = 0; it < 64; ++it) {
            TruncSeries<K> sv = shift_up(v, 1).truncated(Tw);
            TruncSeries<K> vpm1 = TruncSeries<K>::constant(K(1), Tw);
            for (int i = 0; i < p - 1; ++i) vpm1 = mul(vpm1, v);
            TruncSeries<K> vp = mul(vpm1, v);
            TruncSeries<K> wsv = compose(w, sv).extended_exact(Tw);
            TruncSeries<K> Fv = sub(mul(vp, wsv), TruncSeries<K>::constant(K(1), Tw));
            if (Fv.order() == std::nullopt) {
                converged = true;
                break;
            }
            // d/dv of v^p w(sigma v) = p v^{p-1} w(sigma v) + v^p sigma w'(sigma v)
            TruncSeries<K> dF =
                add(scale(mul(vpm1, wsv), K(p)),
                    mul(vp, shift_up(compose(wp, sv), 1).truncated(Tw)));
            v = sub(v, mul(Fv, inverse(dF)));
        }
        if (!converged) throw internal_error("standardize: reparametrization did not converge");
        TruncSeries<K> tser = shift_up(v, 1);
        ynew = compose(Ys, tser.truncated(T));
    }
    // canonical orientation: for even p make the first odd y-coefficient positive
    if (p % 2 == 0) {
        for (int k = 0; k < ynew.trunc(); ++k) {
            if (k % 2 == 1 && !ynew.is_zero_at(k)) {
                if (ynew[k] < K{}) {
                    TruncSeries<K> flipped(ynew.trunc());
                    for (int i = 0; i < ynew.trunc(); ++i)
                        flipped.coeff(i) = (i % 2 ? K(-ynew[i]) : ynew[i]);
                    ynew = flipped;
                }
                break;
            }
        }
    }
    Place<K> pl;
    pl.y = ynew;
    pl.x = TruncSeries<K>::monomial(K(1), p, ynew.trunc());
    pl.center = center;
    pl.standard = true;
    pl.rotation = {c, s};
    pl.exact = raw.exact && !need_reparam;
    return pl;
}

template <typename F>
TruncSeries<F> branch_series(const InnerBranch<F>& b, int trunc) {
    int T = b.exact_tail ? std::max(b.tbudget, trunc) : b.tbudget;
    TruncSeries<F> s(T);
    for (int k = 0; k < std::min<int>(T, static_cast<int>(b.y.size())); ++k)
        s.coeff(k) = b.y[std::size_t(k)];
    return s;
}

template <typename F>
RawPlace<F> raw_from_branch(const InnerBranch<F>& b, bool swap, int xsign, int trunc) {
    TruncSeries<F> S = branch_series(b, trunc);
    TruncSeries<F> M = TruncSeries<F>::monomial(F(xsign), b.ram, S.trunc());
    RawPlace<F> raw;
    if (swap) {
        raw.X = S;
        raw.Y = M;
    } else {
        raw.X = M;
        raw.Y = S;
    }
    raw.exact = b.exact_tail;
    return raw;
}

template <typename F>
RawPlace<double> raw_to_double(const RawPlace<F>& r) {
    RawPlace<double> d;
    TruncSeries<double> X(r.X.trunc()), Y(r.Y.trunc());
    for (int i = 0; i < r.X.trunc(); ++i) X.coeff(i) = to_double(r.X[i]);
    for (int i = 0; i < r.Y.trunc(); ++i) Y.coeff(i) = to_double(r.Y[i]);
    d.X = X;
    d.Y = Y;
    d.exact = false;
    return d;
}

} // namespace puiseux_detail

/// Result of computing the real places of a curve at a center point.
template <typename K>
struct PlacesResult {
    std::vector<Place<K>> places;
    std::vector<Place<double>> approx_places; // irrational branches, float fallback
    std::vector<std::string> notes;
    bool squarefree_reduced = false;
};

/// All real places of f centered at `center`, in standard form, with y
/// trusted up to exponent `trunc`. Branches that would need irrational
/// coefficients in exact mode come back as float places in approx_places.
inline PlacesResult<Rat> places_at(const QPoly2& f, const std::pair<Rat, Rat>& center, int trunc) {
    using namespace puiseux_detail;
    if (trunc < 4) throw geometry_error("places_at: trunc must be at least 4");
    if (f.is_zero()) throw geometry_error("places_at: zero polynomial");
    if (!(f.eval(center.first, center.second) == 0))
        throw geometry_error("places_at: the point does not lie on the curve");

    PlacesResult<Rat> result;
    QPoly2 g = f.translated(center.first, center.second);
    auto sf = squarefree_part(g);
    if (sf.reduced) {
        result.squarefree_reduced = true;
        result.notes.push_back(
            "multiple factors detected; square-free reduction applied before expansion");
        g = sf.poly;
    }

    // strip line components through the center (their offsets are lines)
    if (int k = g.x_order(); k > 0) {
        g = g.x_shifted_down(k);
        result.notes.push_back("vertical line component through the center skipped");
    }
    if (int k = g.y_order(); k > 0) {
        g = g.y_shifted_down(k);
        result.notes.push_back("horizontal line component through the center skipped");
    }
    {
        QPoly acc = QPoly::zero(); // common factor of the x-degree rows of g(x, c*x)
        std::map<int, std::vector<Rat>> rows;
        for (auto& [k, v] : g.terms()) {
            auto& row = rows[k.first + k.second];
            if (static_cast<int>(row.size()) <= k.second) row.resize(std::size_t(k.second) + 1);
            row[std::size_t(k.second)] += v;
        }
        for (auto& [deg, row] : rows) {
            acc = q_gcd(acc, QPoly(row));
            if (acc.degree() == 0) break;
        }
        if (acc.degree() >= 1) {
            QPoly tmp = acc;
            for (const Rat& c0 : extract_rational_roots(tmp)) {
                QPoly2 line = QPoly2::var_y() - QPoly2::var_x().scaled(c0);
                while (auto q = divide_exact(g, line)) {
                    g = *q;
                    result.notes.push_back("line component y = " + to_string(c0) +
                                           "*x through the center skipped");
                }
            }
        }
    }
    if (g.is_zero() || g.total_degree() < 1) {
        result.notes.push_back("only line components pass through this center");
        return result;
    }
    if (!(g.coeff(0, 0) == 0)) {
        result.notes.push_back("center is isolated on the remaining components");
        return result;
    }

    struct Chart {
        QPoly2 poly;
        bool swap;
        int xsign;
        bool even_only;
    };
    const std::vector<Chart> charts = {
        {g, false, +1, false},
        {g.mirrored_x(), false, -1, true},
        {g.swapped_xy(), true, +1, false},
        {g.swapped_xy().mirrored_x(), true, -1, true},
    };

    for (const Chart& chart : charts) {
        Expansion<Rat> ex = expand(chart.poly, trunc, 0);
        dedup_conjugates(ex.main);
        dedup_conjugates(ex.approx);
        auto keep = [&](int ram, const std::optional<int>& ordS) {
            if (chart.swap) return ordS.has_value() && *ordS > ram; // vertical tangents only
            return !ordS.has_value() || *ordS >= ram;               // horizontal + diagonal
        };
        for (auto& b : ex.main) {
            if (chart.even_only && b.ram % 2 == 1) continue;
            TruncSeries<Rat> S = branch_series(b, trunc);
            if (!keep(b.ram, S.order())) continue;
            RawPlace<Rat> raw = raw_from_branch(b, chart.swap, chart.xsign, trunc);
            try {
                result.places.push_back(standardize_raw(raw, center));
            } catch (const exactness_error& e) {
                try {
                    Place<double> pl = standardize_raw(raw_to_double(raw),
                                                       {to_double(center.first), to_double(center.second)});
                    pl.note = std::string("irrational branch (float fallback): ") + e.what();
                    result.approx_places.push_back(std::move(pl));
                } catch (const std::exception& e2) {
                    result.notes.push_back(std::string("branch dropped: ") + e2.what());
                }
            } catch (const geometry_error& e) {
                result.notes.push_back(std::string("branch skipped: ") + e.what());
            }
        }
        for (auto& b : ex.approx) {
            if (chart.even_only && b.ram % 2 == 1) continue;
            TruncSeries<double> S = branch_series(b, trunc);
            if (!keep(b.ram, S.order())) continue;
            RawPlace<double> raw = raw_from_branch(b, chart.swap, chart.xsign, trunc);
            try {
                Place<double> pl = standardize_raw(
                    raw, {to_double(center.first), to_double(center.second)});
                pl.note = "irrational branch (float fallback)";
                result.approx_places.push_back(std::move(pl));
            } catch (const std::exception& e) {
                result.notes.push_back(std::string("approximate branch dropped: ") + e.what());
            }
        }
    }

    if (result.places.empty() && result.approx_places.empty() && result.notes.empty())
        result.notes.push_back("no real branches at this center (isolated real point)");

    // deterministic order: by (p, q, y-coefficients)
    auto key_less = [](const Place<Rat>& a, const Place<Rat>& b) {
        auto pa = a.x.order().value_or(INT_MAX), pb = b.x.order().value_or(INT_MAX);
        if (pa != pb) return pa < pb;
        auto qa = a.y.order().value_or(INT_MAX), qb = b.y.order().value_or(INT_MAX);
        if (qa != qb) return qa < qb;
        const int n = std::min(a.y.trunc(), b.y.trunc());
        for (int i = 0; i < n; ++i)
            if (!(a.y[i] == b.y[i])) return a.y[i] < b.y[i];
        return false;
    };
    std::sort(result.places.begin(), result.places.end(), key_less);
    return result;
}

/// Float-mode view: exact places converted to double plus the fallbacks.
inline PlacesResult<double> places_at_float(const QPoly2& f, const std::pair<Rat, Rat>& center,
                                            int trunc) {
    PlacesResult<Rat> exact = places_at(f, center, trunc);
    PlacesResult<double> out;
    out.notes = exact.notes;
    out.squarefree_reduced = exact.squarefree_reduced;
    for (const auto& pl : exact.places) {
        Place<double> d;
        TruncSeries<double> X(pl.x.trunc()), Y(pl.y.trunc());
        for (int i = 0; i < pl.x.trunc(); ++i) X.coeff(i) = to_double(pl.x[i]);
        for (int i = 0; i < pl.y.trunc(); ++i) Y.coeff(i) = to_double(pl.y[i]);
        d.x = X;
        d.y = Y;
        d.center = {to_double(pl.center.first), to_double(pl.center.second)};
        d.standard = pl.standard;
        d.rotation = {to_double(pl.rotation.first), to_double(pl.rotation.second)};
        d.exact = false;
        d.note = pl.note;
        out.places.push_back(std::move(d));
    }
    for (const auto& pl : exact.approx_places) out.places.push_back(pl);
    return out;
}

/// Local multiplicity of the curve at a point: the intersection count with a
/// generic line through it (minimal total degree after translation).
inline int local_multiplicity(const QPoly2& f, const std::pair<Rat, Rat>& center) {
    QPoly2 g = f.translated(center.first, center.second);
    int m = INT_MAX;
    for (auto& [k, v] : g.terms()) m = std::min(m, k.first + k.second);
    return m == INT_MAX ? 0 : m;
}

} // namespace offsetshape

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "offsetshape/place.hpp"

namespace offsetshape {

/// Generalized-offset parameters: distance d != 0, rotation angle given by
/// (a, b) = (cos theta, sin theta), and the sheet sign. The rotation matrix
/// is A = [[a, -b], [b, a]]; the offset of a point is r + branch*d*A*n with
/// n = (-y', x')/|r'|.
template <typename K>
struct OffsetParams {
    K d{};
    K a{};
    K b{};
    int branch = +1;

    bool classical() const { return coeff_traits<K>::is_zero(b, K(1)); }

    void validate() const {
        if (coeff_traits<K>::is_zero(d, K(1))) throw geometry_error("offset distance d must be nonzero");
        if (!coeff_traits<K>::is_zero(a * a + b * b - K(1), K(1)))
            throw geometry_error("offset angle: (a,b) must satisfy a^2 + b^2 = 1");
        if (branch != 1 && branch != -1) throw geometry_error("offset branch must be +1 or -1");
    }

    OffsetParams with_branch(int s) const {
        OffsetParams o = *this;
        o.branch = s;
        return o;
    }
};

/// Offset place as truncated series in the source place's standard frame.
/// Constant terms are the offset center in that frame.
template <typename K>
struct OffsetPlace {
    TruncSeries<K> X, Y;
    OffsetParams<K> params;
    std::pair<K, K> source_center{K{}, K{}};
    std::pair<K, K> source_rotation{K(1), K{}};
    int source_p = 1;
};

/// Series construction of the generalized offset of a standard place:
/// (X, Y) = (x, y) + branch * d * A * (-y', x') / sqrt(x'^2 + y'^2).
/// The normalizer series uses h^{p-1} (not |h|^{p-1}); for even p the
/// resulting formal place crosses to the other geometric sheet at h < 0.
template <typename K>
OffsetPlace<K> offset_series(const Place<K>& pl, const OffsetParams<K>& op) {
    op.validate();
    if (!pl.standard) throw geometry_error("offset_series: place must be in standard form");
    auto oq = pl.y.order();
    auto opx = pl.x.order();
    if (!opx) throw geometry_error("offset_series: degenerate place");
    if (!oq) throw truncation_error("offset_series: ord_y unknown within trunc");
    const int p = *opx;
    if (pl.trunc() < *oq + 2) throw truncation_error("offset_series: trunc must be at least q+2");

    auto x1 = differentiate(pl.x);
    auto y1 = differentiate(pl.y);
    auto norm2 = add(mul(x1, x1), mul(y1, y1));
    auto [m, w] = extract_monomial_factor(norm2);
    if (m != 2 * p - 2) throw internal_error("offset_series: unexpected normal valuation");
    auto inv = inv_sqrt(w);
    // unit normal components, exact through the h^{p-1} cancellation
    auto nx = mul(shift_down(neg(y1), p - 1), inv);
    auto ny = mul(shift_down(x1, p - 1), inv);
    const K s = coeff_traits<K>::from_int(op.branch);
    const K sd = s * op.d;
    auto anx = sub(scale(nx, op.a), scale(ny, op.b));
    auto any = add(scale(nx, op.b), scale(ny, op.a));
    OffsetPlace<K> out;
    out.X = add(pl.x.truncated(anx.trunc()), scale(anx, sd));
    out.Y = add(pl.y.truncated(any.trunc()), scale(any, sd));
    out.params = op;
    out.source_center = pl.center;
    out.source_rotation = pl.rotation;
    out.source_p = p;
    return out;
}

/// Def-1 signature of the offset place from its series coefficients.
template <typename K>
std::optional<std::pair<int, int>> offset_signature(const OffsetPlace<K>& o) {
    return derivative_signature(o.X, o.Y);
}

namespace detail {

template <typename K>
double eval_double(const TruncSeries<K>& s, double h) {
    double acc = 0;
    for (int i = s.trunc() - 1; i >= 0; --i) acc = acc * h + to_double(s[i]);
    return acc;
}

} // namespace detail

struct SamplePoint {
    double h;
    double x, y;
};

/// Pointwise numeric offset construction in the original coordinate frame
/// (the source place's rotation is undone and its center added back). The
/// unit normal here is the true geometric one, |r'|-normalized; h values
/// where the derivative vanishes are skipped.
template <typename K>
std::vector<SamplePoint> offset_points(const Place<K>& pl, const OffsetParams<K>& op,
                                       const std::vector<double>& hs) {
    op.validate();
    std::vector<SamplePoint> out;
    auto x1 = differentiate(pl.x);
    auto y1 = differentiate(pl.y);
    const double a = to_double(op.a), b = to_double(op.b), d = to_double(op.d);
    const double s = op.branch;
    const double cr = to_double(pl.rotation.first), sr = to_double(pl.rotation.second);
    const double cx = to_double(pl.center.first), cy = to_double(pl.center.second);
    for (double h : hs) {
        double xv = detail::eval_double(pl.x, h), yv = detail::eval_double(pl.y, h);
        double xp = detail::eval_double(x1, h), yp = detail::eval_double(y1, h);
        double len = std::hypot(xp, yp);
        if (len < 1e-300) continue; // singular parameter value (h = 0 of a singular place)
        double nx = -yp / len, ny = xp / len;
        double rx = a * nx - b * ny, ry = b * nx + a * ny;
        double X = xv + s * d * rx, Y = yv + s * d * ry;
        // standard frame -> original frame
        double ox = cr * X - sr * Y + cx;
        double oy = sr * X + cr * Y + cy;
        out.push_back({h, ox, oy});
    }
    return out;
}

/// Curvature of a place as a shifted series: k(h) = h^val * core(h) for
/// h > 0, and k(h) = (-1)^{p-1} h^val core(h) for h < 0 (the |h^{3p-3}|
/// factor flips the sign side only for even p).
template <typename K>
struct CurvatureSeries {
    int val = 0;             // q - 2p generically
    TruncSeries<K> core;     // core(0) != 0
    bool left_flip = false;  // true for even p (cuspidal places)
};

template <typename K>
CurvatureSeries<K> curvature_series(const Place<K>& pl) {
    if (!pl.standard) throw geometry_error("curvature_series: place must be standard");
    auto opx = pl.x.order();
    if (!opx) throw geometry_error("curvature_series: degenerate place");
    const int p = *opx;
    if (pl.trunc() < 3) throw truncation_error("curvature_series: trunc too small");
    auto x1 = differentiate(pl.x), y1 = differentiate(pl.y);
    auto x2 = differentiate(x1), y2 = differentiate(y1);
    auto num = sub(mul(x1, y2), mul(x2, y1));
    auto norm2 = add(mul(x1, x1), mul(y1, y1));
    auto [m, w] = extract_monomial_factor(norm2);
    if (m != 2 * p - 2) throw internal_error("curvature_series: unexpected valuation");
    auto inv = inv_sqrt(w);
    auto inv3 = mul(mul(inv, inv), inv);
    auto full = mul(num, inv3);
    auto [e0, core] = extract_monomial_factor(full);
    CurvatureSeries<K> out;
    out.val = e0 - (3 * p - 3);
    out.core = core;
    out.left_flip = (p % 2 == 0);
    return out;
}

/// Lemma-style curvature summary of a standard place.
template <typename K>
struct CurvatureData {
    std::optional<K> k0;       // right-limit of the curvature when finite
    bool k_unbounded = false;  // q - 2p < 0: curvature blows up at the center
    std::optional<K> kprime0;  // right-limit of dk/ds (arc length), regular places
    K ktilde{};                // 2 beta_q
    K utilde{};                // q beta_q / p
    std::optional<K> mtilde;   // r(r-p)(r-2p)! xi_r / p^2 (needs r and r >= 2p)
    std::optional<K> vt_ratio; // r(r-p) xi_r / p^2 = mtilde/(r-2p)!; what the case
                               // conditions actually consume
};

template <typename K>
CurvatureData<K> curvature_data(const Place<K>& pl, const Signature<K>& sig) {
    CurvatureData<K> out;
    out.ktilde = K(2) * sig.beta_q;
    out.utilde = coeff_traits<K>::from_int(sig.q) * sig.beta_q / coeff_traits<K>::from_int(sig.p);
    if (sig.has_r()) {
        const int r = *sig.r, p = sig.p;
        out.vt_ratio = coeff_traits<K>::from_int(static_cast<long long>(r) * (r - p)) * sig.xi_r /
                       coeff_traits<K>::from_int(static_cast<long long>(p) * p);
        if (r - 2 * p >= 0)
            out.mtilde = *out.vt_ratio * coeff_traits<K>::from_rat(Rat(factorial(r - 2 * p)));
    }
    const int v = sig.q - 2 * sig.p;
    if (v > 0)
        out.k0 = K{};
    else if (v == 0)
        out.k0 = out.ktilde;
    else
        out.k_unbounded = true;
    if (sig.p == 1) {
        // dk/ds = (dk/dh)/|r'|; at h=0 a standard regular place has |r'| = 1
        auto ks = curvature_series(pl);
        // k(h) = h^val core(h): dk/dh at 0 is the h-coefficient of the product
        K kp{};
        if (ks.val == 0 && ks.core.trunc() > 1)
            kp = ks.core[1];
        else if (ks.val == 1)
            kp = ks.core[0];
        out.kprime0 = kp;
    }
    return out;
}

/// Scalar of the regular-point flex condition:
/// d k' sin(theta) + k (k^2 d^2 + 2 d k cos(theta) + 1); zero iff the
/// corresponding offset point is a curvature-vanishing candidate.
template <typename K>
K flex_condition(const K& k, const K& kprime, const OffsetParams<K>& op) {
    return op.d * kprime * op.b + k * (k * k * op.d * op.d + K(2) * op.d * k * op.a + K(1));
}

/// det(I + d k A) = (1 + d k cos)^2 + d^2 k^2 sin^2; a regular point can
/// generate a singular offset point only when this vanishes, which forces
/// sin(theta) = 0 (classical offset) and k = -1/d.
template <typename K>
bool cusp_possible(const K& k, const OffsetParams<K>& op) {
    const K t1 = K(1) + op.d * k * op.a;
    const K t2 = op.d * k * op.b;
    const K det = t1 * t1 + t2 * t2;
    return coeff_traits<K>::is_zero(det, K(1));
}

/// Source-tangent directions generating turning points of a non-classical
/// offset (slopes of the tangent to the source curve).
template <typename K>
struct TurningSlopes {
    // vertical offset tangents: at k=0 with vertical source tangent, or at
    // points with slope -(1 + d k a)/(d k b)
    bool vertical_same_direction = false; // the k=0 clause
    std::optional<K> vertical_slope;
    // horizontal offset tangents: at k=0 with horizontal source tangent, at
    // 1 + dka = 0 with horizontal tangent, or at slope d k b/(1 + d k a)
    bool horizontal_same_direction = false;
    bool horizontal_any_when_unit = false; // the 1 + dka = 0 clause
    std::optional<K> horizontal_slope;
};

template <typename K>
TurningSlopes<K> turning_slopes(const K& k, const OffsetParams<K>& op) {
    if (op.classical())
        throw geometry_error("turning_slopes: classical offset preserves turning points directly");
    TurningSlopes<K> out;
    if (coeff_traits<K>::is_zero(k, K(1))) {
        out.vertical_same_direction = true;
        out.horizontal_same_direction = true;
        return out;
    }
    out.vertical_slope = -(K(1) + op.d * k * op.a) / (op.d * k * op.b);
    const K unit = K(1) + op.d * k * op.a;
    if (coeff_traits<K>::is_zero(unit, K(1)))
        out.horizontal_any_when_unit = true;
    else
        out.horizontal_slope = op.d * k * op.b / unit;
    return out;
}

/// Offset tangent image (I + d k A) r' of a source tangent vector.
template <typename K>
std::pair<K, K> tangent_map(const std::pair<K, K>& rprime, const K& k, const OffsetParams<K>& op) {
    const K dk = op.d * k;
    return {rprime.first + dk * (op.a * rprime.first - op.b * rprime.second),
            rprime.second + dk * (op.b * rprime.first + op.a * rprime.second)};
}

} // namespace offsetshape

#pragma once

#include <optional>
#include <string>
#include <utility>

#include "offsetshape/series.hpp"

namespace offsetshape {

/// The four local-shape classes, decided by the parities of (p,q).
enum class LocalShape { Thorn, Elbow, Beak, Flex };

inline const char* to_string(LocalShape s) {
    switch (s) {
        case LocalShape::Thorn: return "thorn";
        case LocalShape::Elbow: return "elbow";
        case LocalShape::Beak: return "beak";
        case LocalShape::Flex: return "flex";
    }
    return "?";
}

/// Signature (p,q) of a real place plus, when visible within trunc, the
/// exponent r of the next independent y-term and its coefficient.
template <typename K>
struct Signature {
    int p = 0;
    int q = 0;
    std::optional<int> r;   // next y-exponent after q with nonzero coefficient
    K beta_q{};             // leading y coefficient
    K xi_r{};               // coefficient at r (0 when r is absent)
    int y_trunc = 0;        // how far the y coefficients were trusted

    bool has_r() const { return r.has_value(); }
};

inline LocalShape local_shape_of(int p, int q) {
    const bool pe = p % 2 == 0, qe = q % 2 == 0;
    if (pe && qe) return LocalShape::Thorn;
    if (!pe && qe) return LocalShape::Elbow;
    if (pe && !qe) return LocalShape::Beak;
    return LocalShape::Flex;
}

template <typename K>
LocalShape local_shape(const Signature<K>& s) {
    return local_shape_of(s.p, s.q);
}

/// A place is cuspidal iff p is even.
template <typename K>
bool is_cuspidal(const Signature<K>& s) {
    return s.p % 2 == 0;
}

/// A real place (x(h), y(h)) centered at `center`. In standard form, x is
/// exactly h^p and ord_y = q > p; `rotation` records the coordinate rotation
/// (cos, sin) that was applied to reach that frame.
template <typename K>
struct Place {
    TruncSeries<K> x, y;
    std::pair<K, K> center{K{}, K{}};
    bool standard = false;
    std::pair<K, K> rotation{K(1), K{}}; // (cos, sin) applied to the original frame
    bool exact = false;                  // coordinates are exact polynomials
    std::string note;                    // diagnostics (irrational fallback, ...)

    int trunc() const { return std::min(x.trunc(), y.trunc()); }
};

template <typename K>
TruncSeries<double> to_float_series(const TruncSeries<K>& s) {
    TruncSeries<double> out(s.trunc());
    for (int i = 0; i < s.trunc(); ++i) out.coeff(i) = to_double(s[i]);
    return out;
}

template <typename K>
Place<double> to_float_place(const Place<K>& pl) {
    Place<double> out;
    out.x = to_float_series(pl.x);
    out.y = to_float_series(pl.y);
    out.center = {to_double(pl.center.first), to_double(pl.center.second)};
    out.standard = pl.standard;
    out.rotation = {to_double(pl.rotation.first), to_double(pl.rotation.second)};
    out.exact = false;
    out.note = pl.note;
    return out;
}

/// Def-1 signature from the coefficient vectors of an arbitrary (not
/// necessarily standard) place: p is the least k >= 1 with (x_k, y_k)
/// nonzero, q the least k > p with (x_k, y_k) independent of (x_p, y_p).
template <typename K>
std::optional<std::pair<int, int>> derivative_signature(const TruncSeries<K>& x,
                                                        const TruncSeries<K>& y) {
    const int T = std::min(x.trunc(), y.trunc());
    K sx = x.scale(), sy = y.scale();
    auto zero = [&](const K& v) { return coeff_traits<K>::is_zero(v, std::max(sx, sy)); };
    int p = -1;
    for (int k = 1; k < T; ++k)
        if (!zero(x[k]) || !zero(y[k])) {
            p = k;
            break;
        }
    if (p < 0) return std::nullopt;
    const K vx = x[p], vy = y[p];
    for (int k = p + 1; k < T; ++k) {
        // cancellation-aware local scale for the 2x2 determinant
        K det = vx * y[k] - vy * x[k];
        K local = coeff_traits<K>::abs(vx * y[k]) + coeff_traits<K>::abs(vy * x[k]);
        if (!coeff_traits<K>::is_zero(det, local)) return std::make_pair(p, k);
    }
    return std::nullopt; // q not visible within trunc
}

/// Signature of a standard place: p = ord x, q = ord y, r = next nonzero
/// y exponent. Throws when the place is not usable (line or point within
/// trunc, or q invisible at this trunc).
template <typename K>
Signature<K> signature(const Place<K>& pl) {
    if (pl.standard) {
        auto op = pl.x.order();
        auto oq = pl.y.order();
        if (!op) throw geometry_error("signature: x-coordinate vanishes within trunc (degenerate place)");
        if (!oq) {
            if (pl.exact) throw geometry_error("signature: place is a line (y identically zero)");
            throw truncation_error("signature: q not determined within trunc; raise trunc");
        }
        Signature<K> s;
        s.p = *op;
        s.q = *oq;
        s.beta_q = pl.y[s.q];
        s.y_trunc = pl.y.trunc();
        for (int k = s.q + 1; k < pl.y.trunc(); ++k)
            if (!pl.y.is_zero_at(k)) {
                s.r = k;
                s.xi_r = pl.y[k];
                break;
            }
        return s;
    }
    auto pq = derivative_signature(pl.x, pl.y);
    if (!pq) throw truncation_error("signature: derivative test inconclusive within trunc");
    Signature<K> s;
    s.p = pq->first;
    s.q = pq->second;
    s.beta_q = pl.y[s.q]; // informational in the non-standard frame
    s.y_trunc = pl.y.trunc();
    return s;
}

} // namespace offsetshape

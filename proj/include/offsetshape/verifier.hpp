#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "offsetshape/predictor.hpp"
#include "offsetshape/rng.hpp"

namespace offsetshape {

/// Sampled realization of one offset branch, ordered by strictly increasing
/// h and straddling h = 0. `center` is the exact limit point of the branch.
struct PointCloud {
    std::string branch_id;
    std::vector<SamplePoint> samples;
    std::pair<double, double> center{0, 0};
    std::string params_echo;
};

/// Builds the cloud of a formal offset branch. For even p the formal series
/// normal h^{p-1}/|h^{p-1}| flips sign across h = 0, so the h < 0 half is
/// sampled on the opposite geometric sheet; the assembled cloud is exactly
/// the image of the formal place.
template <typename K>
PointCloud offset_cloud(const Place<K>& pl, const OffsetParams<K>& op, int n_per_side,
                        double hmin, double hmax) {
    auto opx = pl.x.order();
    if (!opx) throw geometry_error("offset_cloud: degenerate place");
    const bool flip = (*opx % 2 == 0);
    std::vector<double> hp, hn;
    const double ratio = std::pow(hmax / hmin, 1.0 / std::max(1, n_per_side - 1));
    for (int i = 0; i < n_per_side; ++i) {
        double h = hmin * std::pow(ratio, i);
        hp.push_back(h);
        hn.push_back(-h);
    }
    std::sort(hn.begin(), hn.end());
    auto neg = offset_points(pl, op.with_branch(flip ? -op.branch : op.branch), hn);
    auto pos = offset_points(pl, op.with_branch(op.branch), hp);
    PointCloud cloud;
    cloud.branch_id = op.branch > 0 ? "gen+" : "gen-";
    cloud.samples = std::move(neg);
    cloud.samples.insert(cloud.samples.end(), pos.begin(), pos.end());
    // exact branch center: standard-frame constants (-s d b, s d a) rotated back
    const double s = op.branch, d = to_double(op.d), a = to_double(op.a), b = to_double(op.b);
    const double X0 = -s * d * b, Y0 = s * d * a;
    const double cr = to_double(pl.rotation.first), sr = to_double(pl.rotation.second);
    cloud.center = {cr * X0 - sr * Y0 + to_double(pl.center.first),
                    sr * X0 + cr * Y0 + to_double(pl.center.second)};
    std::ostringstream echo;
    echo << "d=" << d << " a=" << a << " b=" << b << " branch=" << (s > 0 ? "+" : "-");
    cloud.params_echo = echo.str();
    return cloud;
}

/// Numeric local-shape estimate from a sampled branch.
struct NumericShape {
    enum class Kind { shape, regular, undetermined };
    Kind kind = Kind::undetermined;
    std::optional<LocalShape> shape;
    double p_hat = 0, q_hat = 0;
    double r2_tangential = 0, r2_normal = 0;
    std::string note;
};

namespace verifier_detail {

struct Fit {
    double slope = 0, r2 = 0;
    bool ok = false;
};

inline Fit loglog_fit(const std::vector<std::pair<double, double>>& pts) {
    Fit f;
    if (pts.size() < 6) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = static_cast<double>(pts.size());
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    if (std::fabs(denom) < 1e-12) return f;
    f.slope = (n * sxy - sx * sy) / denom;
    double icept = (sy - f.slope * sx) / n;
    double ssr = 0, sst = 0, ybar = sy / n;
    for (auto& [x, y] : pts) {
        double e = y - (f.slope * x + icept);
        ssr += e * e;
        sst += (y - ybar) * (y - ybar);
    }
    f.r2 = sst > 0 ? 1.0 - ssr / sst : 0.0;
    f.ok = true;
    return f;
}

} // namespace verifier_detail

/// Estimates (p, q) parities from a clean cloud: rotates so the limiting
/// tangent is along +x, fits log|component| against log|h| on each side,
/// and reads the parities off the side signs. Fits with R^2 below 0.999
/// abstain as undetermined.
inline NumericShape numeric_shape(const PointCloud& cloud) {
    using namespace verifier_detail;
    NumericShape out;
    std::vector<const SamplePoint*> neg, pos;
    for (auto& p : cloud.samples)
        (p.h < 0 ? neg : pos).push_back(&p);
    if (static_cast<int>(cloud.samples.size()) < 64 || neg.size() < 8 || pos.size() < 8) {
        out.note = "too few samples";
        return out;
    }
    // sort by |h| ascending
    std::sort(neg.begin(), neg.end(), [](auto* a, auto* b) { return -a->h < -b->h; });
    std::sort(pos.begin(), pos.end(), [](auto* a, auto* b) { return a->h < b->h; });
    const double cx = cloud.center.first, cy = cloud.center.second;
    // limiting tangent direction, iteratively refined against leakage
    double vx, vy;
    {
        double dx = pos[0]->x - cx, dy = pos[0]->y - cy;
        double L = std::hypot(dx, dy);
        if (L <= 0) {
            out.note = "sample collides with the center";
            return out;
        }
        vx = dx / L;
        vy = dy / L;
    }
    // Richardson extrapolation of the direction error: with v aimed at the
    // smallest sample, the apparent angle eps(h) = eps_v + c h^m vanishes at
    // h1; two further log-spaced samples recover eps_v.
    for (int it = 0; it < 2 && pos.size() >= 3; ++it) {
        auto eps_at = [&](const SamplePoint& p) {
            double dx = p.x - cx, dy = p.y - cy;
            double t = dx * vx + dy * vy;
            double n = -dx * vy + dy * vx;
            return (std::fabs(t) > 1e-300) ? n / t : 0.0;
        };
        double e1 = eps_at(*pos[0]);
        {
            // re-aim exactly at the smallest sample first
            double nvx = vx - e1 * vy, nvy = vy + e1 * vx;
            double L = std::hypot(nvx, nvy);
            vx = nvx / L;
            vy = nvy / L;
        }
        double e2 = eps_at(*pos[1]), e3 = eps_at(*pos[2]);
        if (std::fabs(e2) < 1e-14) break;
        double R = e3 / e2;
        if (!(R > 1.1 && R < 1e6)) break;
        double eps_v = e2 / (2.0 - R);
        double nvx = vx - eps_v * vy, nvy = vy + eps_v * vx;
        double L = std::hypot(nvx, nvy);
        vx = nvx / L;
        vy = nvy / L;
    }
    auto tang = [&](const SamplePoint& p) { return (p.x - cx) * vx + (p.y - cy) * vy; };
    auto norm = [&](const SamplePoint& p) { return -(p.x - cx) * vy + (p.y - cy) * vx; };
    // log-log fits on the positive side (の|h| >= 1e-4 per the sampling contract)
    std::vector<std::pair<double, double>> tf, nf;
    for (auto* p : pos) {
        if (std::fabs(p->h) < 1e-4) continue;
        double t = std::fabs(tang(*p)), n = std::fabs(norm(*p));
        if (t > 1e-14) tf.push_back({std::log(std::fabs(p->h)), std::log(t)});
        if (n > 1e-13) nf.push_back({std::log(std::fabs(p->h)), std::log(n)});
    }
    Fit ft = loglog_fit(tf), fn = loglog_fit(nf);
    out.p_hat = ft.slope;
    out.q_hat = fn.slope;
    out.r2_tangential = ft.r2;
    out.r2_normal = fn.r2;
    if (!ft.ok || !fn.ok || ft.r2 < 0.999 || fn.r2 < 0.999) {
        out.note = "log-log fit rejected (R^2 gate)";
        return out;
    }
    int p_round = static_cast<int>(std::lround(ft.slope));
    int q_round = static_cast<int>(std::lround(fn.slope));
    if (std::fabs(ft.slope - p_round) > 0.2 || std::fabs(fn.slope - q_round) > 0.25 ||
        p_round < 1 || q_round <= p_round) {
        out.note = "slope estimates off-integer";
        return out;
    }
    // parities from side signs: smallest |h| pairs whose components clear the
    // double-precision noise floor
    const double floor_t = 1e-12 * (1 + std::fabs(cx) + std::fabs(cy));
    const double floor_n = floor_t;
    int agree_t = 0, flip_t = 0, agree_n = 0, flip_n = 0;
    int used_t = 0, used_n = 0;
    for (std::size_t i = 0; i < neg.size() && i < pos.size(); ++i) {
        double tp = tang(*pos[i]), tn = tang(*neg[i]);
        double np = norm(*pos[i]), nn = norm(*neg[i]);
        if (used_t < 3 && std::fabs(tp) > floor_t && std::fabs(tn) > floor_t) {
            (tp * tn > 0 ? agree_t : flip_t)++;
            ++used_t;
        }
        if (used_n < 3 && std::fabs(np) > floor_n && std::fabs(nn) > floor_n) {
            (np * nn > 0 ? agree_n : flip_n)++;
            ++used_n;
        }
        if (used_t >= 3 && used_n >= 3) break;
    }
    if (used_t == 0 || used_n == 0) {
        out.note = "components below noise floor";
        return out;
    }
    if ((agree_t && flip_t) || (agree_n && flip_n)) {
        out.note = "inconsistent side signs";
        return out;
    }
    const bool p_even = agree_t > 0, q_even = agree_n > 0;
    if ((p_round % 2 == 0) != p_even || (q_round % 2 == 0) != q_even) {
        out.note = "slope parity disagrees with side signs";
        return out;
    }
    out.shape = local_shape_of(p_even ? 2 : 1, q_even ? 2 : 1);
    if (p_round == 1) {
        out.kind = NumericShape::Kind::regular;
    } else {
        out.kind = NumericShape::Kind::shape;
    }
    return out;
}

/// Tangent-reversal cusp detection on an ordered cloud; an optional
/// resampler refines each bracket by bisection.
struct CuspReport {
    int count = 0;
    std::vector<double> locations;
};

inline CuspReport count_cusps(const PointCloud& cloud,
                              const std::function<SamplePoint(double)>& resample = nullptr) {
    CuspReport rep;
    const auto& s = cloud.samples;
    if (s.size() < 8) throw geometry_error("count_cusps: too few samples");
    auto seg = [&](const SamplePoint& a, const SamplePoint& b, double& tx, double& ty) {
        tx = b.x - a.x;
        ty = b.y - a.y;
        double L = std::hypot(tx, ty);
        if (L > 0) {
            tx /= L;
            ty /= L;
        }
    };
    for (std::size_t i = 0; i + 2 < s.size(); ++i) {
        double t1x, t1y, t2x, t2y;
        seg(s[i], s[i + 1], t1x, t1y);
        seg(s[i + 1], s[i + 2], t2x, t2y);
        if (t1x * t2x + t1y * t2y < 0.0) {
            double lo = s[i].h, hi = s[i + 2].h;
            if (resample) {
                for (int it = 0; it < 48 && hi - lo > 1e-14; ++it) {
                    double mid = 0.5 * (lo + hi);
                    double delta = (hi - lo) / 8;
                    SamplePoint A = resample(lo), M1 = resample(mid - delta),
                                M2 = resample(mid + delta);
                    double ax, ay, bx, by;
                    seg(A, M1, ax, ay);
                    seg(M1, M2, bx, by);
                    if (ax * bx + ay * by < 0)
                        hi = mid + delta;
                    else
                        lo = mid - delta;
                }
            }
            rep.locations.push_back(0.5 * (lo + hi));
            ++rep.count;
        }
    }
    return rep;
}

enum class Agreement { agree, disagree, abstain };

inline const char* to_string(Agreement a) {
    switch (a) {
        case Agreement::agree: return "agree";
        case Agreement::disagree: return "disagree";
        case Agreement::abstain: return "abstain";
    }
    return "?";
}

/// Three-source verdict for one branch of one place/params pair.
template <typename K>
struct BranchVerdict {
    int branch = +1;
    Prediction<K> prediction;
    std::optional<std::pair<int, int>> series_sig;
    std::optional<LocalShape> series_shape;
    bool series_preserved = false;
    NumericShape numeric;
    Agreement pred_vs_series = Agreement::abstain;
    Agreement series_vs_numeric = Agreement::abstain;
    std::vector<std::string> notes;
};

template <typename K>
struct CrossCheckResult {
    Signature<K> sig;
    LocalShape source_shape = LocalShape::Elbow;
    std::vector<BranchVerdict<K>> branches;
    bool decisive_disagreement = false;
};

struct VerifyConfig {
    int trunc = 32;
    bool xi_commit = true;
    int cloud_samples_per_side = 48;
    double cloud_hmin = 8e-3;
    double cloud_hmax = 0.3;
    bool run_numeric = true;
};

/// Runs the case analysis, the series classifier, and the numeric estimator
/// on both offset branches and reconciles them.
template <typename K>
CrossCheckResult<K> cross_check(const Place<K>& pl, const OffsetParams<K>& op,
                                const VerifyConfig& cfg = {}) {
    CrossCheckResult<K> out;
    out.sig = signature(pl);
    out.source_shape = local_shape(out.sig);
    auto cd = curvature_data(pl, out.sig);
    for (int s : {+1, -1}) {
        BranchVerdict<K> v;
        v.branch = s;
        v.prediction = predict(out.sig, cd, op, s, cfg.xi_commit);
        auto o = offset_series(pl, op.with_branch(s));
        auto sig0 = offset_signature(o);
        if (sig0) {
            v.series_sig = sig0;
            v.series_shape = local_shape_of(sig0->first, sig0->second);
            v.series_preserved = (*v.series_shape == out.source_shape);
        }
        // predictor vs series
        const auto& pr = v.prediction;
        if (!sig0) {
            v.pred_vs_series = Agreement::abstain;
            v.notes.push_back("series signature unresolved within trunc");
        } else if (pr.preserved == Preserved::yes || pr.preserved == Preserved::no) {
            bool pred_says = (pr.preserved == Preserved::yes);
            bool ok = (pred_says == v.series_preserved);
            if (ok && pr.p0) ok = (*pr.p0 == sig0->first);
            if (ok && pr.q0) ok = (*pr.q0 == sig0->second);
            v.pred_vs_series = ok ? Agreement::agree : Agreement::disagree;
            if (!ok) out.decisive_disagreement = true;
        } else {
            v.pred_vs_series = Agreement::abstain;
            // partial signature information is still checkable
            if (pr.p0 && sig0 && *pr.p0 != sig0->first) {
                v.pred_vs_series = Agreement::disagree;
                out.decisive_disagreement = true;
            }
        }
        if (cfg.run_numeric) {
            auto cloud = offset_cloud(pl, op.with_branch(s), cfg.cloud_samples_per_side,
                                      cfg.cloud_hmin, cfg.cloud_hmax);
            v.numeric = numeric_shape(cloud);
            if (v.numeric.kind == NumericShape::Kind::undetermined || !sig0) {
                v.series_vs_numeric = Agreement::abstain;
            } else if (v.numeric.kind == NumericShape::Kind::regular) {
                v.series_vs_numeric =
                    (sig0->first == 1) ? Agreement::agree : Agreement::disagree;
            } else {
                v.series_vs_numeric = (v.numeric.shape == v.series_shape)
                                          ? Agreement::agree
                                          : Agreement::disagree;
            }
        }
        out.branches.push_back(std::move(v));
    }
    return out;
}

/// Aggregated counts for one clause tag.
struct ClauseTally {
    int hits = 0;
    int decisive_pass = 0;
    int decisive_fail = 0;
    int undetermined = 0;
    int borderline = 0;
    int numeric_agree = 0;
    int numeric_abstain = 0;
    int numeric_disagree = 0;
};

struct SuiteItemRepro {
    std::string place;
    std::string params;
    int branch;
    std::string case_id;
};

struct SuiteReport {
    std::uint64_t seed = 0;
    int n = 0;
    std::map<std::string, ClauseTally> per_case;
    std::vector<SuiteItemRepro> disagreements;
    int decisive_disagreements = 0;
    int items_run = 0;
};

struct SuiteBounds {
    int p_max = 4;
    int q_max = 9;
    int r_max = 12;
    bool force_flex = false;
    bool force_smoothing = false;
    bool force_qgt2p = false;
};

namespace verifier_detail {

inline const std::vector<std::pair<Rat, Rat>>& pythagorean_pool() {
    static const std::vector<std::pair<Rat, Rat>> pool = {
        {Rat(3, 5), Rat(4, 5)},     {Rat(4, 5), Rat(3, 5)},   {Rat(5, 13), Rat(12, 13)},
        {Rat(12, 13), Rat(5, 13)},  {Rat(8, 17), Rat(15, 17)}, {Rat(15, 17), Rat(8, 17)},
        {Rat(7, 25), Rat(24, 25)},  {Rat(20, 29), Rat(21, 29)},
    };
    return pool;
}

inline Rat pool_coeff(Rng& rng, bool nonzero) {
    long long n = rng.int_in(-6, 6);
    if (nonzero && n == 0) n = rng.int_in(1, 5);
    return Rat(n, rng.int_in(1, 4));
}

} // namespace verifier_detail

/// Generates n random standard places with rational offset parameters,
/// stratified so that every clause family is exercised (including the
/// degenerate-route coincidences), and cross-checks all three sources.
inline SuiteReport random_suite(std::uint64_t seed, int n, const SuiteBounds& bounds = {},
                                const VerifyConfig& cfg = {}) {
    using namespace verifier_detail;
    SuiteReport rep;
    rep.seed = seed;
    rep.n = n;
    Rng rng(seed);
    const auto& angles = pythagorean_pool();
    for (int item = 0; item < n; ++item) {
        int mode = item % 9;
        int p, q;
        std::optional<int> r;
        if (bounds.force_flex) {
            p = 1 + 2 * static_cast<int>(rng.below(2));
            q = p + 2;
            if (q % 2 == 0) q += 1;
            while (q <= p) q += 2;
        } else if (bounds.force_smoothing) {
            p = static_cast<int>(rng.int_in(2, std::max(2, bounds.p_max)));
            q = p + 1;
        } else if (bounds.force_qgt2p) {
            p = static_cast<int>(rng.int_in(1, 3));
            q = 2 * p + 1 + static_cast<int>(rng.below(3));
        } else {
            switch (mode) {
                case 0:
                    p = static_cast<int>(rng.int_in(1, bounds.p_max));
                    q = p + 1;
                    break;
                case 1:
                    p = static_cast<int>(rng.int_in(1, 3));
                    q = 2 * p + 1 + static_cast<int>(rng.below(3));
                    break;
                case 2: // q = 2p, r > 3p (generic and degenerate routes)
                case 3:
                    p = static_cast<int>(rng.int_in(1, 3));
                    q = 2 * p;
                    r = 3 * p + 1 + static_cast<int>(rng.below(3));
                    break;
                case 4: // q = 2p, r = 3p
                    p = static_cast<int>(rng.int_in(2, 3));
                    q = 2 * p;
                    r = 3 * p;
                    break;
                case 5: // q = 2p, r < 3p
                    p = 3;
                    q = 2 * p;
                    r = q + 1 + static_cast<int>(rng.below(2));
                    break;
                case 6: // q < 2p with xi
                    p = static_cast<int>(rng.int_in(3, std::max(4, bounds.p_max + 2)));
                    q = p + 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - 2)));
                    r = q + 1 + static_cast<int>(rng.below(3));
                    break;
                case 7: // q < 2p pure
                    p = static_cast<int>(rng.int_in(3, std::max(4, bounds.p_max + 2)));
                    q = p + 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - 2)));
                    break;
                default: // odd-odd (flex) sources
                    p = 1 + 2 * static_cast<int>(rng.below(2));
                    q = p + 2 + 2 * static_cast<int>(rng.below(2));
                    break;
            }
        }
        q = std::min(q, bounds.q_max);
        if (q <= p) q = p + 1;
        if (r && (*r <= q || *r > bounds.r_max)) r = std::min(bounds.r_max, std::max(q + 1, *r));

        Rat beta = pool_coeff(rng, true);
        std::vector<std::pair<int, Rat>> terms{{q, beta}};
        if (r) {
            terms.push_back({*r, pool_coeff(rng, true)});
            if (rng.chance(1, 3) && *r + 2 <= 2 * bounds.r_max)
                terms.push_back({*r + 1 + static_cast<int>(rng.below(2)), pool_coeff(rng, false)});
        }
        const int T = std::max(cfg.trunc, 4 * std::max(q, r.value_or(q)) + 8);
        Place<Rat> pl;
        pl.x = TruncSeries<Rat>::monomial(Rat(1), p, T);
        TruncSeries<Rat> y(T);
        for (auto& [e, c] : terms) y.coeff(e) = c;
        pl.y = y;
        pl.standard = true;
        pl.exact = true;

        auto [a, b] = angles[rng.below(angles.size())];
        Rat d(rng.int_in(1, 5), rng.int_in(1, 3));
        if (rng.chance(1, 2)) d = -d;
        // steer q = 2p items into the degenerate route on one branch
        if (q == 2 * p && rng.chance(1, 2)) {
            Rat kt = 2 * beta;
            int s0 = rng.chance(1, 2) ? 1 : -1;
            d = Rat(s0) / (a * kt); // makes 1 - s0 d a ktilde = 0
        }
        OffsetParams<Rat> op{d, a, b, +1};

        auto res = cross_check(pl, op, cfg);
        ++rep.items_run;
        for (auto& bv : res.branches) {
            auto& tally = rep.per_case[bv.prediction.case_id];
            ++tally.hits;
            switch (bv.prediction.preserved) {
                case Preserved::yes:
                case Preserved::no:
                    if (bv.pred_vs_series == Agreement::agree)
                        ++tally.decisive_pass;
                    else if (bv.pred_vs_series == Agreement::disagree)
                        ++tally.decisive_fail;
                    break;
                case Preserved::undetermined:
                    ++tally.undetermined;
                    if (bv.pred_vs_series == Agreement::disagree) ++tally.decisive_fail;
                    break;
                case Preserved::borderline:
                    ++tally.borderline;
                    break;
            }
            switch (bv.series_vs_numeric) {
                case Agreement::agree: ++tally.numeric_agree; break;
                case Agreement::abstain: ++tally.numeric_abstain; break;
                case Agreement::disagree: ++tally.numeric_disagree; break;
            }
            if (bv.pred_vs_series == Agreement::disagree) {
                ++rep.decisive_disagreements;
                std::ostringstream place_txt;
                place_txt << "x=h^" << p << ", y=";
                bool first = true;
                for (auto& [e, c] : terms) {
                    if (!first) place_txt << " + ";
                    place_txt << to_string(c) << "*h^" << e;
                    first = false;
                }
                std::ostringstream params_txt;
                params_txt << "d=" << to_string(d) << " a=" << to_string(a) << " b=" << to_string(b);
                rep.disagreements.push_back(
                    {place_txt.str(), params_txt.str(), bv.branch, bv.prediction.case_id});
            }
        }
    }
    return rep;
}

} // namespace offsetshape

#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "offsetshape/rational.hpp"

namespace offsetshape {

/// Session-wide relative tolerance used by float-mode zero tests.
/// Exact mode never consults it.
inline std::atomic<double>& tolerance_slot() {
    static std::atomic<double> tol{1e-12};
    return tol;
}
inline double tolerance() { return tolerance_slot().load(std::memory_order_relaxed); }
inline void set_tolerance(double t) { tolerance_slot().store(t, std::memory_order_relaxed); }

enum class ZeroState { zero, borderline, nonzero };

/// Coefficient-field operations shared by the exact (Rat) and float (double)
/// instantiations. `scale` is a magnitude reference for scale-aware float
/// zero detection: |c| <= tol*(1+scale) counts as zero.
template <typename K>
struct coeff_traits;

template <>
struct coeff_traits<Rat> {
    static constexpr bool exact = true;
    static bool is_zero(const Rat& c, const Rat& = Rat()) { return c == 0; }
    static ZeroState zero_state(const Rat& c, const Rat& = Rat()) {
        return c == 0 ? ZeroState::zero : ZeroState::nonzero;
    }
    static Rat abs(const Rat& c) { return c < 0 ? Rat(-c) : c; }
    static std::string str(const Rat& c) { return offsetshape::to_string(c); }
    static Rat from_rat(const Rat& r) { return r; }
    static Rat from_int(long long n) { return Rat(n); }
};

template <>
struct coeff_traits<double> {
    static constexpr bool exact = false;
    static bool is_zero(double c, double scale = 0.0) {
        return std::fabs(c) <= tolerance() * (1.0 + std::fabs(scale));
    }
    static ZeroState zero_state(double c, double scale = 0.0) {
        const double band = tolerance() * (1.0 + std::fabs(scale));
        const double a = std::fabs(c);
        if (a <= band) return ZeroState::zero;
        if (a <= 1e3 * band) return ZeroState::borderline;
        return ZeroState::nonzero;
    }
    static double abs(double c) { return std::fabs(c); }
    static std::string str(double c) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", c);
        return buf;
    }
    static double from_rat(const Rat& r) { return to_double(r); }
    static double from_int(long long n) { return static_cast<double>(n); }
};

} // namespace offsetshape

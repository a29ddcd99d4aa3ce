#pragma once

#include <stdexcept>
#include <string>

namespace offsetshape {

/// Input text could not be parsed; carries a 0-based position when known.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
    explicit parse_error(const std::string& msg) : std::runtime_error(msg), pos_(npos) {}
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_ = npos;
};

/// Geometric precondition failed (point not on curve, degenerate place, ...).
class geometry_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A computation ran out of trusted coefficients; callers may raise trunc.
class truncation_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact arithmetic cannot represent a value (irrational root, ...).
class exactness_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Violated internal invariant; indicates a bug, not bad input.
class internal_error : public std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace offsetshape

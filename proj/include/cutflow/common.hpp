#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cutflow {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error types named after the failure they report. All derive from
// std::runtime_error so callers can catch coarsely or precisely.
struct EmptyActiveMesh : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateIntersection : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonUnitNormal : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OrderTooHigh : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidSlipLength : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cutflow

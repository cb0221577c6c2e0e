#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ses {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Input outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool near(double a, double b, double rel, double abs_floor = 0.0)
{
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) <= std::max(rel * scale, abs_floor);
}

} // namespace ses

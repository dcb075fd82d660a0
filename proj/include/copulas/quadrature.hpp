#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace copulas {

struct QuadratureConfig {
    int base_subintervals = 64;
    /// Gauss-Legendre nodes per subinterval.
    int nodes_per_subinterval = 16;
    std::vector<double> extra_breakpoints;
    double adaptive_tol = 1e-8;
    int max_depth = 12;

    /// Throws std::invalid_argument on non-positive counts or tolerance, or
    /// breakpoints outside [0,1].
    void check() const;
};

/// The adaptive estimate still exceeded its tolerance after max_depth
/// bisections.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Integral {
    double value = 0.0;
    /// Sum over accepted subintervals of |coarse - refined|.
    double error = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1,1], ascending.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

/// Integral of f over [0,1]. The interval is split at every breakpoint and at
/// k/base_subintervals; each piece is integrated with an n-node rule and
/// bisected while the whole-vs-halves estimates differ by more than
/// adaptive_tol / (number of pieces), halving that budget per level. Pieces
/// are summed left to right.
Integral integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                   const QuadratureConfig& q);

}  // namespace copulas

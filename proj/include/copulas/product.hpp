#pragma once

#include <optional>
#include <string_view>

#include "copulas/copula.hpp"
#include "copulas/family.hpp"
#include "copulas/quadrature.hpp"
#include "copulas/shuffle.hpp"

namespace copulas {

/// Which shortcut produced a product evaluator.
enum class FastPath {
    None,
    IdentityM,
    ZeroPi,
    WClosedForm,
    InvertibleReduction,
    ShuffleClosedForm,
};

std::string_view to_string(FastPath path);

enum class FastPathPolicy {
    Allow,
    /// Always integrate; used to cross-check the closed forms.
    ForceQuadrature,
};

struct ProductResult {
    Copula evaluator;
    FastPath fast_path = FastPath::None;
    /// Largest quadrature error estimate over a 3 x 3 interior probe lattice;
    /// zero for closed forms.
    double error_estimate = 0.0;
};

/// (A*B)(u,v) = integral of d2A(u,t) d1B(t,v) dt.
///
/// Shortcuts, in order: A or B equal to M returns the other factor; A or B
/// equal to Pi returns Pi; a W factor uses u - A(u,1-v) or v - B(1-u,v); a
/// shuffle factor uses the piecewise closed form. Otherwise the integral is
/// evaluated on demand, split at the derivative jumps of both factors.
/// Throws QuadratureError when the probe evaluations do not converge.
ProductResult star(const Copula& a, const Copula& b, const QuadratureConfig& q = {},
                   FastPathPolicy policy = FastPathPolicy::Allow);

/// (A *_F B)(x,y) = integral of C_t(d2A(x,t), d1B(t,y)) dt.
///
/// Shortcuts, in order: an M factor, a W factor, then invertible_reduction.
ProductResult star_c(const Copula& a, const CopulaFamily& f, const Copula& b,
                     const QuadratureConfig& q = {}, FastPathPolicy policy = FastPathPolicy::Allow);

/// When A is right invertible or B is left invertible the family drops out
/// and A *_F B = A * B. Returns that product, or nothing otherwise.
std::optional<ProductResult> invertible_reduction(const Copula& a, const CopulaFamily& f,
                                                  const Copula& b, const QuadratureConfig& q = {});

/// S * C accumulated piece by piece from differences of C.
Copula shuffle_star(const ShuffleOfM& s, const Copula& c);
/// C * S, the transpose of S^T * C^T.
Copula star_shuffle(const Copula& c, const ShuffleOfM& s);

/// Single quadrature evaluations with no shortcuts.
Integral star_integral(const Copula& a, const Copula& b, double x, double y,
                       const QuadratureConfig& q = {});
Integral star_c_integral(const Copula& a, const CopulaFamily& f, const Copula& b, double x, double y,
                         const QuadratureConfig& q = {});

}  // namespace copulas

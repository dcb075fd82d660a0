#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace copulas {

class ShuffleOfM;

enum class CopulaKind {
    FrechetM,
    FrechetW,
    ProductPi,
    FGM,
    ShuffleOfM,
    StraightShuffle,
    Transpose,
    Grid,
    Computed,
};

std::string_view to_string(CopulaKind kind);

/// Step used by the finite-difference partial derivatives.
inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Closed rectangle [x1,x2] x [y1,y2] inside the unit square.
struct Rectangle {
    double x1 = 0.0;
    double x2 = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;

    /// Throws std::invalid_argument unless 0 <= x1 <= x2 <= 1 and likewise for y.
    static Rectangle make(double x1, double x2, double y1, double y2);
};

struct FGMParams {
    double theta = 0.0;

    /// Throws std::invalid_argument when |theta| > 1.
    static FGMParams make(double theta);
};

/// Evaluation back end of a copula. Implementations are immutable; the
/// arguments they receive have already been checked against [0,1].
///
/// Partial derivatives follow one fixed a.e. convention: at a point where
/// the derivative does not exist the right-hand value is returned, and the
/// left-hand value when the differentiated variable equals 1.
class CopulaImpl {
public:
    virtual ~CopulaImpl() = default;

    virtual CopulaKind kind() const = 0;
    virtual double eval(double u, double v) const = 0;

    /// d/du C(u,v). The default is a finite difference.
    virtual double partial1(double u, double v) const;
    /// d/dv C(u,v). The default is a finite difference.
    virtual double partial2(double u, double v) const;
    virtual bool analytic_partials() const { return false; }

    /// Values of u where u -> partial1(u, v) may jump or kink.
    virtual std::vector<double> partial1_breaks(double /*v*/) const { return {}; }
    /// Values of v where v -> partial2(u, v) may jump or kink.
    virtual std::vector<double> partial2_breaks(double /*u*/) const { return {}; }

    virtual bool left_invertible() const { return false; }
    virtual bool right_invertible() const { return false; }

    /// Exact shuffle representation, when the copula is a shuffle of M.
    virtual std::optional<ShuffleOfM> shuffle() const;

    /// Canonical expression text (the CLI grammar) naming this copula.
    virtual std::string expression() const = 0;
};

/// Shared, immutable handle to a 2-copula.
class Copula {
public:
    explicit Copula(std::shared_ptr<const CopulaImpl> impl);

    CopulaKind kind() const { return impl_->kind(); }

    /// C(u,v). Throws std::domain_error when u or v is outside [0,1].
    double eval(double u, double v) const;
    double operator()(double u, double v) const { return eval(u, v); }

    /// d/du C(u,v), clamped to [0,1].
    double partial1(double u, double v) const;
    /// d/dv C(u,v), clamped to [0,1].
    double partial2(double u, double v) const;
    bool analytic_partials() const { return impl_->analytic_partials(); }

    std::vector<double> partial1_breaks(double v) const { return impl_->partial1_breaks(v); }
    std::vector<double> partial2_breaks(double u) const { return impl_->partial2_breaks(u); }

    bool left_invertible() const { return impl_->left_invertible(); }
    bool right_invertible() const { return impl_->right_invertible(); }

    std::optional<ShuffleOfM> as_shuffle() const;
    std::string expression() const { return impl_->expression(); }

    const CopulaImpl& impl() const { return *impl_; }

private:
    std::shared_ptr<const CopulaImpl> impl_;
};

Copula frechet_m();
Copula frechet_w();
Copula product_pi();
Copula fgm(double theta);
Copula fgm(FGMParams params);

/// C^T(u,v) = C(v,u). Invertibility flags swap; transposing twice returns
/// the original handle.
Copula transpose(const Copula& c);

/// Wraps an arbitrary evaluator (used for product results). Partial
/// derivatives are finite differences.
Copula make_computed(std::string expression, std::function<double(double, double)> evaluator,
                     bool left_invertible = false, bool right_invertible = false);

/// C-volume of a rectangle.
double volume(const Copula& c, const Rectangle& r);

/// Central difference with step h, one-sided within h of the boundary,
/// clamped to [0,1].
double finite_difference_partial1(const Copula& c, double u, double v,
                                  double h = kFiniteDifferenceStep);
double finite_difference_partial2(const Copula& c, double u, double v,
                                  double h = kFiniteDifferenceStep);

/// Throws std::domain_error unless x is a number in [0,1].
void check_unit(double x, const char* what);

}  // namespace copulas

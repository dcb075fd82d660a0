#pragma once

#include <string>
#include <variant>
#include <vector>

#include "copulas/copula.hpp"
#include "copulas/quadrature.hpp"

namespace copulas {

/// Piecewise polynomial t -> theta(t) on [0,1], clipped to [-1,1].
/// Piece i covers [breakpoints[i], breakpoints[i+1]) and evaluates
/// sum_k coefficients[i][k] * t^k.
class ThetaCurve {
public:
    static ThetaCurve polynomial(std::vector<double> coefficients);
    /// Throws std::invalid_argument unless breakpoints run strictly from 0 to
    /// 1 and there is one non-empty coefficient list per piece.
    static ThetaCurve piecewise(std::vector<double> breakpoints,
                                std::vector<std::vector<double>> coefficients);

    double operator()(double t) const;
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<std::vector<double>>& coefficients() const { return coefficients_; }

    /// Piece boundaries plus the points where clipping to [-1,1] switches on
    /// or off, located by sampling and bisection.
    std::vector<double> kinks() const;

private:
    std::vector<double> breakpoints_;
    std::vector<std::vector<double>> coefficients_;
};

/// Which measurability theorem certifies a family. Mc (countably many
/// members on Borel level sets) implies Mu (jointly Borel); both make the
/// product integrand measurable.
enum class MeasurabilityClass { Mc, Mu };

std::string_view to_string(MeasurabilityClass c);

/// A family {C_t}, t in [0,1], restricted to representations whose
/// measurability is certified by construction.
class CopulaFamily {
public:
    enum class Kind { Constant, PiecewiseConstant, ParametricCurve };

    static CopulaFamily constant(Copula member);
    /// `breakpoints` is 0 = t0 < ... < tk = 1; member i is active on
    /// [t_i, t_{i+1}) and the last member also at t = 1. Every member is
    /// validated on a coarse lattice.
    static CopulaFamily piecewise(std::vector<double> breakpoints, std::vector<Copula> members);
    /// C_t = FGM(theta(t)).
    static CopulaFamily fgm_curve(ThetaCurve theta);

    Kind kind() const { return kind_; }

    /// C_t(x, y).
    double eval(double t, double x, double y) const;
    /// The copula active at t.
    Copula member_at(double t) const;

    /// Points in (0,1) where t -> C_t(x,y) may jump or kink.
    std::vector<double> breakpoints() const;

    const std::vector<double>& piece_breakpoints() const { return breakpoints_; }
    const std::vector<Copula>& members() const { return members_; }
    const ThetaCurve& theta() const { return theta_; }

    /// Canonical expression text in the CLI grammar.
    std::string expression() const;

private:
    CopulaFamily() = default;

    std::size_t piece_index(double t) const;

    Kind kind_ = Kind::Constant;
    std::vector<double> breakpoints_{0.0, 1.0};
    std::vector<Copula> members_;
    ThetaCurve theta_;
    std::vector<double> kinks_;
};

double family_eval(const CopulaFamily& f, double t, double x, double y);

MeasurabilityClass measurability_class(const CopulaFamily& f);

/// True iff the families agree for all t outside a finite set. On each cell
/// of the common refinement of the breakpoints the members are compared at
/// `samples` interior values of t, on a 33 x 33 lattice with tolerance 1e-12.
bool ae_equal(const CopulaFamily& f, const CopulaFamily& g, int samples = 8);

/// Integral over t of C_t(x, y). Piecewise-constant families are summed
/// exactly (member value times interval length); curves use quadrature.
double family_integral(const CopulaFamily& f, double x, double y, const QuadratureConfig& q = {});

}  // namespace copulas

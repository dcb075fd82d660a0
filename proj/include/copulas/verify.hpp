#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "copulas/copula.hpp"
#include "copulas/family.hpp"
#include "copulas/product.hpp"
#include "copulas/quadrature.hpp"
#include "copulas/shuffle.hpp"

namespace copulas {

/// Outcome of one experiment.
struct VerificationReport {
    std::string name;
    bool pass = false;
    /// Largest deviation observed; never negative.
    double deviation = 0.0;
    /// (x, y), or (alpha, x, y) for straight-shuffle sweeps. Always set for
    /// failures.
    std::vector<double> witness;
    std::map<std::string, std::string> params;
};

struct VerifyOptions {
    QuadratureConfig quadrature;
    FastPathPolicy policy = FastPathPolicy::Allow;
    /// Points per axis: the lattice is {k/(lattice-1)}.
    std::size_t lattice = 33;
};

inline constexpr double kDefaultCheckTolerance = 1e-5;

/// M' is a two-sided identity for *_F on the corpus: both M' *_F A and
/// A *_F M' stay within tol of A. M' defaults to M.
VerificationReport check_identity(const CopulaFamily& f, const std::vector<Copula>& corpus, double tol,
                                  const VerifyOptions& opts = {}, const Copula& identity = frechet_m());

/// Necessary condition for *_F to have a zero: the t-average of C_t is Pi.
/// A failure proves there is no zero; a pass proves nothing more (the
/// report is tagged "necessary-only").
VerificationReport check_zero_necessary(const CopulaFamily& f, double tol,
                                        const VerifyOptions& opts = {});

/// Fixed-point test S_alpha *_F U = U for every alpha. Only Pi can satisfy
/// it for all alpha.
VerificationReport check_zero_candidate(const CopulaFamily& f, const Copula& candidate,
                                        const std::vector<double>& alphas, double tol,
                                        const VerifyOptions& opts = {});

/// With F = pw(1/2: fgm(theta), fgm(-theta)) the necessary zero condition
/// holds, yet fgm(theta) *_F Pi differs from Pi: passes iff both happen
/// (the deviation exceeds 10 tol at some requested point with x not in
/// {0, 1/2, 1}). Throws std::invalid_argument for theta = 0.
VerificationReport fgm_counterexample(double theta, const std::vector<Point>& points, double tol = 1e-6,
                                      const VerifyOptions& opts = {});

/// Sup distance of A *_{F_n} B from A *_F B for each approximant; passes iff
/// the errors are non-increasing up to 10% slack and the last is <= 1e-3.
VerificationReport convergence_study(const CopulaFamily& target,
                                     const std::vector<CopulaFamily>& approximants, const Copula& a,
                                     const Copula& b, const VerifyOptions& opts = {});

/// Piecewise-constant family on `intervals` equal cells, each cell taking
/// the member active at its midpoint.
CopulaFamily midpoint_approximation(const CopulaFamily& f, int intervals);

/// The three-piece shuffle with cuts 0.2, 0.7, sigma = (3,1,2), middle piece
/// descending.
Copula figure_shuffle();

std::vector<double> default_alphas();
std::vector<Copula> default_corpus();
std::vector<CopulaFamily> default_families();

/// Selections for the named suites.
struct SuiteOptions {
    VerifyOptions verify;
    double tol = kDefaultCheckTolerance;
    /// Replaces the default families when non-empty.
    std::vector<CopulaFamily> families;
    /// Zero candidate; Pi when empty.
    std::vector<Copula> candidates;
    double theta = 1.0;
};

inline constexpr std::string_view kSuiteNames[] = {"identity", "zero-necessary", "zero-candidate",
                                                   "fgm", "convergence", "all"};

/// Runs a named suite. Throws std::invalid_argument for an unknown name.
std::vector<VerificationReport> run_suite(std::string_view suite, const SuiteOptions& opts = {});

/// `name | PASS | deviation | witness | params`, one line per report.
std::string format_text(const std::vector<VerificationReport>& reports);
/// {"pass": bool, "reports": [{name, pass, deviation, witness: [x,y], params}]}
std::string format_json(const std::vector<VerificationReport>& reports);

}  // namespace copulas

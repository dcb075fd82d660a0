#include "copulas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "copulas/format.hpp"
#include "copulas/metrics.hpp"

namespace copulas {

namespace {

constexpr double kConvergenceSlack = 1.1;
// Absolute floor for the monotonicity test so that rounding-level errors
// do not count as growth.
constexpr double kConvergenceFloor = 1e-12;
constexpr double kConvergenceTarget = 1e-3;

std::size_t divisions(const VerifyOptions& opts) {
    if (opts.lattice < 2) throw std::invalid_argument("lattice needs at least 2 points per axis");
    return opts.lattice - 1;
}

std::string sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

std::string policy_name(FastPathPolicy p) {
    return p == FastPathPolicy::Allow ? "allow" : "force-quadrature";
}

void common_params(VerificationReport& r, const VerifyOptions& opts) {
    r.params["lattice"] = std::to_string(opts.lattice);
    r.params["fast_path"] = policy_name(opts.policy);
    r.params["qtol"] = format_shortest(opts.quadrature.adaptive_tol);
    r.params["subintervals"] = std::to_string(opts.quadrature.base_subintervals);
    r.params["nodes"] = std::to_string(opts.quadrature.nodes_per_subinterval);
}

// Values on the lattice, row-major with x outer.
std::vector<double> lattice_values(const Copula& c, std::size_t n) {
    std::vector<double> out;
    out.reserve((n + 1) * (n + 1));
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            out.push_back(c.eval(static_cast<double>(i) / n, static_cast<double>(j) / n));
        }
    }
    return out;
}

LatticeMaximum max_gap(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    LatticeMaximum best{-1.0, 0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = std::abs(a[k] - b[k]);
        if (d > best.value || std::isnan(d)) {
            best = {d, static_cast<double>(k / (n + 1)) / n, static_cast<double>(k % (n + 1)) / n};
        }
    }
    return best;
}

CopulaFamily fgm_pm_family(double theta) {
    return CopulaFamily::piecewise({0.0, 0.5, 1.0}, {fgm(theta), fgm(-theta)});
}

std::string join_expressions(const std::vector<Copula>& corpus) {
    std::string out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (i > 0) out += " ";
        out += corpus[i].expression();
    }
    return out;
}

}  // namespace

VerificationReport check_identity(const CopulaFamily& f, const std::vector<Copula>& corpus, double tol,
                                  const VerifyOptions& opts, const Copula& identity) {
    if (corpus.empty()) throw std::invalid_argument("identity check needs a non-empty corpus");
    const std::size_t n = divisions(opts);
    VerificationReport r;
    r.name = "identity[" + f.expression() + "]";
    r.params["family"] = f.expression();
    r.params["identity"] = identity.expression();
    r.params["corpus"] = join_expressions(corpus);
    r.params["tol"] = format_shortest(tol);
    common_params(r, opts);
    double worst = -1.0;
    for (const auto& a : corpus) {
        const auto target = lattice_values(a, n);
        for (int side = 0; side < 2; ++side) {
            const ProductResult p = side == 0 ? star_c(identity, f, a, opts.quadrature, opts.policy)
                                              : star_c(a, f, identity, opts.quadrature, opts.policy);
            const LatticeMaximum gap = max_gap(lattice_values(p.evaluator, n), target, n);
            if (gap.value > worst) {
                worst = gap.value;
                r.witness = {gap.x, gap.y};
                r.params["worst_product"] = p.evaluator.expression();
            }
        }
    }
    r.deviation = worst;
    r.pass = worst <= tol;
    return r;
}

VerificationReport check_zero_necessary(const CopulaFamily& f, double tol, const VerifyOptions& opts) {
    const std::size_t n = divisions(opts);
    VerificationReport r;
    r.name = "zero-necessary[" + f.expression() + "]";
    r.params["family"] = f.expression();
    r.params["tol"] = format_shortest(tol);
    r.params["scope"] = "necessary-only";
    common_params(r, opts);
    const LatticeMaximum gap = lattice_max_abs(
        [&](double x, double y) { return family_integral(f, x, y, opts.quadrature) - x * y; }, n);
    r.deviation = gap.value;
    r.witness = {gap.x, gap.y};
    r.pass = gap.value <= tol;
    return r;
}

VerificationReport check_zero_candidate(const CopulaFamily& f, const Copula& candidate,
                                        const std::vector<double>& alphas, double tol,
                                        const VerifyOptions& opts) {
    if (alphas.empty()) throw std::invalid_argument("zero-candidate check needs at least one alpha");
    const std::size_t n = divisions(opts);
    VerificationReport r;
    r.name = "zero-candidate[" + candidate.expression() + ";" + f.expression() + "]";
    r.params["family"] = f.expression();
    r.params["candidate"] = candidate.expression();
    r.params["tol"] = format_shortest(tol);
    std::string alpha_list;
    for (double a : alphas) alpha_list += (alpha_list.empty() ? "" : ",") + format_shortest(a);
    r.params["alphas"] = alpha_list;
    common_params(r, opts);
    const auto target = lattice_values(candidate, n);
    double worst = -1.0;
    for (double alpha : alphas) {
        const Copula s = to_copula(straight_shuffle(alpha));
        const ProductResult p = star_c(s, f, candidate, opts.quadrature, opts.policy);
        const LatticeMaximum gap = max_gap(lattice_values(p.evaluator, n), target, n);
        if (gap.value > worst) {
            worst = gap.value;
            r.witness = {alpha, gap.x, gap.y};
        }
    }
    r.deviation = worst;
    r.pass = worst <= tol;
    return r;
}

VerificationReport fgm_counterexample(double theta, const std::vector<Point>& points, double tol,
                                      const VerifyOptions& opts) {
    if (theta == 0.0) {
        throw std::invalid_argument("theta = 0 collapses the family to const(Pi)");
    }
    if (points.empty()) throw std::invalid_argument("counterexample needs at least one point");
    const CopulaFamily f = fgm_pm_family(theta);
    const Copula a = fgm(theta);
    const VerificationReport necessary = check_zero_necessary(f, tol, opts);
    const ProductResult p = star_c(a, f, product_pi(), opts.quadrature, opts.policy);

    VerificationReport r;
    r.name = "fgm-counterexample[theta=" + format_shortest(theta) + "]";
    r.params["theta"] = format_shortest(theta);
    r.params["family"] = f.expression();
    r.params["product"] = p.evaluator.expression();
    r.params["tol"] = format_shortest(tol);
    r.params["necessary_condition"] = necessary.pass ? "holds" : "fails";
    r.params["necessary_deviation"] = sci(necessary.deviation);
    common_params(r, opts);
    double worst = -1.0;
    bool separated = false;
    for (const auto& pt : points) {
        const double d = std::abs(p.evaluator.eval(pt.x, pt.y) - pt.x * pt.y);
        r.params["deviation(" + format_shortest(pt.x) + "," + format_shortest(pt.y) + ")"] = sci(d);
        if (d > worst) {
            worst = d;
            r.witness = {pt.x, pt.y};
        }
        const bool interior = pt.x != 0.0 && pt.x != 0.5 && pt.x != 1.0;
        if (interior && d > 10.0 * tol) separated = true;
    }
    r.deviation = worst;
    r.pass = necessary.pass && separated;
    return r;
}

VerificationReport convergence_study(const CopulaFamily& target,
                                     const std::vector<CopulaFamily>& approximants, const Copula& a,
                                     const Copula& b, const VerifyOptions& opts) {
    if (approximants.empty()) throw std::invalid_argument("convergence study needs approximants");
    const std::size_t n = divisions(opts);
    VerificationReport r;
    r.name = "convergence[" + target.expression() + ";" + a.expression() + "," + b.expression() + "]";
    r.params["target"] = target.expression();
    r.params["a"] = a.expression();
    r.params["b"] = b.expression();
    common_params(r, opts);
    const auto reference = lattice_values(star_c(a, target, b, opts.quadrature, opts.policy).evaluator, n);
    std::vector<double> errors;
    LatticeMaximum last{};
    for (std::size_t k = 0; k < approximants.size(); ++k) {
        const ProductResult p = star_c(a, approximants[k], b, opts.quadrature, opts.policy);
        last = max_gap(lattice_values(p.evaluator, n), reference, n);
        errors.push_back(last.value);
        char key[32];
        std::snprintf(key, sizeof key, "error_%02zu", k + 1);
        r.params[key] = sci(last.value);
    }
    bool monotone = true;
    for (std::size_t k = 1; k < errors.size(); ++k) {
        if (errors[k] > kConvergenceSlack * errors[k - 1] + kConvergenceFloor) monotone = false;
    }
    r.params["monotone"] = monotone ? "yes" : "no";
    r.deviation = errors.back();
    r.witness = {last.x, last.y};
    r.pass = monotone && errors.back() <= kConvergenceTarget;
    return r;
}

CopulaFamily midpoint_approximation(const CopulaFamily& f, int intervals) {
    if (intervals < 1) throw std::invalid_argument("approximation needs at least one interval");
    std::vector<double> breaks;
    std::vector<Copula> members;
    for (int k = 0; k <= intervals; ++k) breaks.push_back(static_cast<double>(k) / intervals);
    for (int k = 0; k < intervals; ++k) members.push_back(f.member_at((k + 0.5) / intervals));
    return CopulaFamily::piecewise(std::move(breaks), std::move(members));
}

Copula figure_shuffle() {
    return to_copula(ShuffleOfM::make({0.0, 0.2, 0.7, 1.0}, {3, 1, 2}, {false, true, false}));
}

std::vector<double> default_alphas() {
    std::vector<double> out;
    for (int k = 1; k <= 9; ++k) out.push_back(k / 10.0);
    return out;
}

std::vector<Copula> default_corpus() {
    return {product_pi(), frechet_w(), fgm(1.0), to_copula(straight_shuffle(0.3)), figure_shuffle()};
}

std::vector<CopulaFamily> default_families() {
    return {CopulaFamily::constant(product_pi()), CopulaFamily::constant(fgm(1.0)), fgm_pm_family(1.0),
            CopulaFamily::fgm_curve(ThetaCurve::polynomial({-1.0, 2.0}))};
}

std::vector<VerificationReport> run_suite(std::string_view suite, const SuiteOptions& opts) {
    const auto families = opts.families.empty() ? default_families() : opts.families;
    std::vector<VerificationReport> out;
    const bool all = suite == "all";
    bool known = all;
    if (all || suite == "identity") {
        known = true;
        for (const auto& f : families) out.push_back(check_identity(f, default_corpus(), opts.tol, opts.verify));
    }
    if (all || suite == "zero-necessary") {
        known = true;
        std::vector<CopulaFamily> zero_families = opts.families;
        if (zero_families.empty()) {
            zero_families.push_back(CopulaFamily::constant(product_pi()));
            for (double theta : {0.1, 0.5, 1.0}) zero_families.push_back(fgm_pm_family(theta));
        }
        for (const auto& f : zero_families) out.push_back(check_zero_necessary(f, opts.tol, opts.verify));
    }
    if (all || suite == "zero-candidate") {
        known = true;
        const auto candidates =
            opts.candidates.empty() ? std::vector<Copula>{product_pi()} : opts.candidates;
        for (const auto& f : families) {
            for (const auto& u : candidates) {
                out.push_back(check_zero_candidate(f, u, default_alphas(), opts.tol, opts.verify));
            }
        }
    }
    if (all || suite == "fgm") {
        known = true;
        out.push_back(fgm_counterexample(opts.theta, {{0.25, 0.5}, {0.5, 0.5}, {0.75, 0.5}}, 1e-6,
                                         opts.verify));
    }
    if (all || suite == "convergence") {
        known = true;
        std::vector<CopulaFamily> constants;
        for (int k = 1; k <= 6; ++k) constants.push_back(CopulaFamily::constant(fgm(1.0 - std::ldexp(1.0, -k))));
        out.push_back(convergence_study(CopulaFamily::constant(fgm(1.0)), constants, product_pi(),
                                        product_pi(), opts.verify));
        const CopulaFamily curve = CopulaFamily::fgm_curve(ThetaCurve::polynomial({-1.0, 2.0}));
        std::vector<CopulaFamily> midpoints;
        for (int k = 2; k <= 6; ++k) midpoints.push_back(midpoint_approximation(curve, 1 << k));
        out.push_back(convergence_study(curve, midpoints, fgm(0.5), fgm(0.5), opts.verify));
    }
    if (!known) throw std::invalid_argument("unknown verification suite: " + std::string(suite));
    return out;
}

std::string format_text(const std::vector<VerificationReport>& reports) {
    std::string out;
    for (const auto& r : reports) {
        out += r.name;
        out += " | ";
        out += r.pass ? "PASS" : "FAIL";
        out += " | ";
        out += sci(r.deviation);
        out += " | (";
        for (std::size_t i = 0; i < r.witness.size(); ++i) {
            if (i > 0) out += ", ";
            out += format_shortest(r.witness[i]);
        }
        out += ") | ";
        bool first = true;
        for (const auto& [k, v] : r.params) {
            if (!first) out += "; ";
            first = false;
            out += k + "=" + v;
        }
        out += "\n";
    }
    return out;
}

std::string format_json(const std::vector<VerificationReport>& reports) {
    nlohmann::ordered_json doc;
    bool all_pass = true;
    doc["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        all_pass = all_pass && r.pass;
        nlohmann::ordered_json item;
        item["name"] = r.name;
        item["pass"] = r.pass;
        item["deviation"] = r.deviation;
        // (alpha, x, y) witnesses keep [x, y] here and move alpha to params.
        const std::size_t offset = r.witness.size() == 3 ? 1 : 0;
        item["witness"] = nlohmann::ordered_json::array();
        for (std::size_t i = offset; i < r.witness.size(); ++i) item["witness"].push_back(r.witness[i]);
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.params) params[k] = v;
        if (offset == 1) params["witness_alpha"] = format_shortest(r.witness[0]);
        item["params"] = std::move(params);
        doc["reports"].push_back(std::move(item));
    }
    doc["pass"] = all_pass;
    return doc.dump(2) + "\n";
}

}  // namespace copulas

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "copulas/cli.hpp"
#include "copulas/dsl.hpp"
#include "copulas/grid.hpp"
#include "copulas/metrics.hpp"
#include "copulas/product.hpp"
#include "copulas/verify.hpp"
#include "dsl_corpus.hpp"
#include "oracles.hpp"

using namespace copulas;

namespace {

constexpr std::size_t kLattice = 32;  // divisions: 33 points per axis
constexpr auto kForce = FastPathPolicy::ForceQuadrature;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

QuadratureConfig tight() {
    QuadratureConfig q;
    q.adaptive_tol = 1e-8;
    return q;
}

std::vector<CopulaFamily> test_families() {
    return {CopulaFamily::constant(product_pi()), CopulaFamily::constant(fgm(1.0)),
            CopulaFamily::piecewise({0.0, 0.5, 1.0}, {fgm(1.0), fgm(-1.0)}),
            CopulaFamily::fgm_curve(ThetaCurve::polynomial({-1.0, 2.0}))};
}

// Every product built by the earlier checks, re-validated by property_suites.
std::vector<Copula> g_products;

Copula keep(Copula c) {
    g_products.push_back(c);
    return c;
}

Outcome identity_law() {
    Outcome o;
    VerifyOptions opts{tight(), kForce, kLattice + 1};
    double worst = 0.0;
    for (const auto& f : test_families()) {
        const VerificationReport r = check_identity(f, default_corpus(), 1e-5, opts);
        worst = std::max(worst, r.deviation);
        o.require(r.pass, r.name + " deviation " + sci(r.deviation));
        for (const auto& a : default_corpus()) {
            keep(star_c(frechet_m(), f, a, tight(), kForce).evaluator);
            keep(star_c(a, f, frechet_m(), tight(), kForce).evaluator);
        }
    }
    o.detail = o.pass ? "max deviation " + sci(worst) : o.detail;
    return o;
}

Outcome w_closed_form() {
    Outcome o;
    double worst = 0.0;
    for (const Copula& b : {product_pi(), fgm(1.0), to_copula(straight_shuffle(0.3))}) {
        for (const auto& f : test_families()) {
            const Copula p = keep(star_c(b, f, frechet_w(), tight(), kForce).evaluator);
            const double d =
                lattice_max_abs([&](double u, double v) { return p(u, v) - (u - b(u, 1.0 - v)); }, kLattice).value;
            worst = std::max(worst, d);
            o.require(d <= 1e-5, p.expression() + " deviation " + sci(d));
        }
    }
    if (o.pass) o.detail = "max deviation " + sci(worst);
    return o;
}

Outcome constant_member() {
    Outcome o;
    double worst = 0.0;
    for (const Copula& c : {frechet_m(), frechet_w(), fgm(1.0), fgm(-1.0), to_copula(straight_shuffle(0.3))}) {
        const Copula p = keep(star_c(product_pi(), CopulaFamily::constant(c), product_pi(), tight(), kForce).evaluator);
        const double d = sup_distance(p, c, kLattice);
        worst = std::max(worst, d);
        o.require(d <= 1e-6, c.expression() + " deviation " + sci(d));
    }
    if (o.pass) o.detail = "max deviation " + sci(worst);
    return o;
}

Outcome invertible_reduction_law() {
    Outcome o;
    double worst = 0.0;
    const Copula s = to_copula(straight_shuffle(0.3));
    for (const Copula& b : {product_pi(), fgm(1.0)}) {
        const Copula reference = star(s, b).evaluator;
        for (const auto& f : test_families()) {
            const Copula p = keep(star_c(s, f, b, tight(), kForce).evaluator);
            const double d = sup_distance(p, reference, kLattice);
            worst = std::max(worst, d);
            o.require(d <= 1e-5, p.expression() + " deviation " + sci(d));
        }
    }
    if (o.pass) o.detail = "max deviation " + sci(worst);
    return o;
}

Outcome inverse_remark() {
    Outcome o;
    double worst = 0.0;
    auto check = [&](const Copula& p) {
        keep(p);
        const double d = sup_distance(p, frechet_m(), kLattice);
        worst = std::max(worst, d);
        o.require(d <= 1e-5, p.expression() + " deviation " + sci(d));
    };
    for (const Copula& s : {to_copula(straight_shuffle(0.3)), figure_shuffle()}) {
        for (FastPathPolicy policy : {FastPathPolicy::Allow, kForce}) {
            check(star(s, transpose(s), tight(), policy).evaluator);
            check(star(transpose(s), s, tight(), policy).evaluator);
        }
    }
    check(star(frechet_w(), frechet_w(), tight(), kForce).evaluator);
    if (o.pass) o.detail = "max deviation " + sci(worst);
    return o;
}

Outcome necessary_zero() {
    Outcome o;
    double worst = 0.0;
    for (double theta : {0.1, 0.5, 1.0}) {
        const auto f = CopulaFamily::piecewise({0.0, 0.5, 1.0}, {fgm(theta), fgm(-theta)});
        const VerificationReport r = check_zero_necessary(f, 1e-12);
        worst = std::max(worst, r.deviation);
        o.require(r.pass && r.deviation <= 1e-12, r.name + " deviation " + sci(r.deviation));
    }
    const VerificationReport c = check_zero_necessary(CopulaFamily::constant(fgm(1.0)), 1e-5);
    const bool witness_ok = c.witness.size() == 2 && c.witness[0] == 0.5 && c.witness[1] == 0.5;
    o.require(!c.pass && std::abs(c.deviation - 0.0625) <= 1e-9 && witness_ok,
              "const(fgm(1)) gave deviation " + sci(c.deviation));
    if (o.pass) o.detail = "pw max deviation " + sci(worst) + ", const(fgm(1)) deviation " + sci(c.deviation) + " at (0.5, 0.5)";
    return o;
}

Outcome fgm_counterexample_law() {
    Outcome o;
    const auto f = CopulaFamily::piecewise({0.0, 0.5, 1.0}, {fgm(1.0), fgm(-1.0)});
    const Copula p = keep(star_c(fgm(1.0), f, product_pi(), tight(), kForce).evaluator);
    const double off = p(0.25, 0.5) - 0.125;
    const double mid = std::abs(p(0.5, 0.5) - 0.25);
    o.require(std::abs(off - 0.01171875) <= 1e-6, "deviation at (0.25, 0.5) is " + sci(off));
    o.require(std::abs(off - oracle::fgm_counterexample_deviation(1.0, 0.25, 0.5)) <= 1e-6, "oracle mismatch");
    o.require(mid <= 1e-6, "deviation at (0.5, 0.5) is " + sci(mid));
    const VerificationReport r = fgm_counterexample(1.0, {{0.25, 0.5}, {0.5, 0.5}});
    o.require(r.pass, "suite report failed");
    if (o.pass) o.detail = "deviation " + sci(off) + " at (0.25, 0.5), " + sci(mid) + " at (0.5, 0.5)";
    return o;
}

Outcome zero_candidates() {
    Outcome o;
    const CopulaFamily pi = CopulaFamily::constant(product_pi());
    const VerificationReport r = check_zero_candidate(pi, product_pi(), default_alphas(), 1e-5);
    o.require(r.pass, "Pi deviation " + sci(r.deviation));
    std::string detail = "Pi " + sci(r.deviation);
    for (const Copula& u : {frechet_m(), frechet_w(), fgm(1.0)}) {
        const VerificationReport bad = check_zero_candidate(pi, u, default_alphas(), 1e-5);
        o.require(!bad.pass && bad.deviation >= 1e-2, u.expression() + " deviation " + sci(bad.deviation));
        detail += ", " + u.expression() + " " + sci(bad.deviation);
    }
    for (double alpha : default_alphas()) keep(star_c(to_copula(straight_shuffle(alpha)), pi, product_pi()).evaluator);
    if (o.pass) o.detail = detail;
    return o;
}

Outcome convergence() {
    Outcome o;
    const CopulaFamily curve = CopulaFamily::fgm_curve(ThetaCurve::polynomial({-1.0, 2.0}));
    std::vector<CopulaFamily> approx;
    for (int n : {4, 8, 16, 32, 64}) approx.push_back(midpoint_approximation(curve, n));
    VerifyOptions opts;
    opts.lattice = kLattice + 1;
    const VerificationReport r = convergence_study(curve, approx, fgm(0.5), fgm(0.5), opts);
    std::string errors;
    for (const auto& [k, v] : r.params) {
        if (k.rfind("error_", 0) == 0) errors += (errors.empty() ? "" : " ") + v;
    }
    o.require(r.pass, "errors " + errors);
    keep(star_c(fgm(0.5), curve, fgm(0.5)).evaluator);
    for (const auto& f : approx) keep(star_c(fgm(0.5), f, fgm(0.5)).evaluator);
    if (o.pass) o.detail = "errors " + errors;
    return o;
}

Outcome property_suites() {
    Outcome o;
    const Copula fig = figure_shuffle();
    std::vector<Copula> analytic{frechet_m(), frechet_w(), product_pi(), fgm(1.0), fgm(-1.0), fgm(0.5),
                                 to_copula(straight_shuffle(0.3)), fig, transpose(fig)};
    analytic.insert(analytic.end(), g_products.begin(), g_products.end());
    double boundary = 0.0;
    double volume = 0.0;
    for (const auto& c : analytic) {
        const ValidationReport r = validate(c, 64, 1e-12);
        boundary = std::max(boundary, r.boundary_error);
        volume = std::min(volume, r.min_volume);
        o.require(r.boundary_error <= 1e-12 && r.min_volume >= -1e-12, c.expression() + " invalid");
    }
    for (const Copula& g : {to_copula(grid_from_copula(fgm(1.0), 16)), to_copula(grid_from_copula(figure_shuffle(), 10))}) {
        const ValidationReport r = validate(g, 64, 1e-9);
        o.require(r.boundary_error <= 1e-9 && r.min_volume >= -1e-12, g.expression() + " invalid");
    }

    double shuffle_gap = 0.0;
    for (const ShuffleOfM& s : {straight_shuffle(0.3), *fig.as_shuffle()}) {
        const auto segments = support_segments(s);
        shuffle_gap = std::max(shuffle_gap, lattice_max_abs([&](double u, double v) {
                                                return s.eval(u, v) - oracle::mass_accumulation(segments, u, v);
                                            }, 64).value);
    }
    o.require(shuffle_gap <= 1e-12, "shuffle oracle gap " + sci(shuffle_gap));

    const Copula f = fgm(1.0);
    double fd = 0.0;
    const double h = kFiniteDifferenceStep;
    for (int i = 0; i <= 64; ++i) {
        for (int j = 0; j <= 64; ++j) {
            const double u = i / 64.0;
            const double v = j / 64.0;
            if (u >= h && u <= 1 - h) fd = std::max(fd, std::abs(finite_difference_partial1(f, u, v) - f.partial1(u, v)));
            if (v >= h && v <= 1 - h) fd = std::max(fd, std::abs(finite_difference_partial2(f, u, v) - f.partial2(u, v)));
        }
    }
    o.require(fd <= 1e-6, "finite-difference error " + sci(fd));
    if (o.pass) {
        o.detail = std::to_string(analytic.size()) + " copulas, boundary " + sci(boundary) + ", min volume " +
                   sci(volume) + ", shuffle oracle " + sci(shuffle_gap) + ", FD " + sci(fd);
    }
    return o;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome cli_determinism() {
    Outcome o;
    const std::string dir = TEST_DATA_DIR;
    std::string outs[2];
    for (int k = 0; k < 2; ++k) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_cli({"verify", "all", "--out", dir + "/acceptance_" + std::to_string(k)}, out, err);
        o.require(code == 0, "verify all exited " + std::to_string(code));
        outs[k] = out.str();
    }
    o.require(outs[0] == outs[1], "stdout differs");
    for (const char* ext : {".txt", ".json"}) {
        o.require(slurp(dir + "/acceptance_0" + ext) == slurp(dir + "/acceptance_1" + ext),
                  std::string(ext) + " reports differ");
    }
    std::size_t round_trips = 0;
    for (const auto& text : dsl_corpus::kExpressions) {
        try {
            const Expr e = parse(text);
            if (parse(print(e)) == e) ++round_trips;
        } catch (const DslError& e) {
            o.require(false, text + ": " + e.what());
        }
    }
    o.require(dsl_corpus::kExpressions.size() == 30 && round_trips == 30,
              std::to_string(round_trips) + " of " + std::to_string(dsl_corpus::kExpressions.size()) + " round trips");
    if (o.pass) o.detail = "reports byte-identical, 30/30 round trips";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"identity law", identity_law},
        {"W closed form", w_closed_form},
        {"Pi *_C Pi recovers the constant member", constant_member},
        {"invertible reduction", invertible_reduction_law},
        {"shuffle inverses", inverse_remark},
        {"necessary zero condition", necessary_zero},
        {"FGM counterexample", fgm_counterexample_law},
        {"zero-candidate elimination", zero_candidates},
        {"convergence", convergence},
        {"property suites", property_suites},
        {"CLI determinism", cli_determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}

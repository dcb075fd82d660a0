#include <doctest.h>

#include <json.hpp>
#include <stdexcept>

#include "copulas/verify.hpp"

using namespace copulas;

namespace {

CopulaFamily fgm_pm(double theta) { return CopulaFamily::piecewise({0.0, 0.5, 1.0}, {fgm(theta), fgm(-theta)}); }

}  // namespace

TEST_CASE("identity check") {
    const auto r = check_identity(fgm_pm(1.0), default_corpus(), 1e-5);
    CHECK(r.pass);
    CHECK(r.deviation <= 1e-12);
    CHECK(r.witness.size() == 2);
    // Pi is not an identity.
    const auto bad = check_identity(CopulaFamily::constant(product_pi()), {fgm(1.0)}, 1e-5, {}, product_pi());
    CHECK_FALSE(bad.pass);
    CHECK(bad.deviation == doctest::Approx(0.0625));
    CHECK(bad.witness == std::vector<double>{0.5, 0.5});
    CHECK_THROWS_AS(check_identity(fgm_pm(1.0), {}, 1e-5), std::invalid_argument);
}

TEST_CASE("necessary zero condition") {
    for (double theta : {0.1, 0.5, 1.0}) {
        const auto r = check_zero_necessary(fgm_pm(theta), 1e-12);
        CHECK(r.pass);
        CHECK(r.deviation <= 1e-12);
        CHECK(r.params.at("scope") == "necessary-only");
    }
    const auto r = check_zero_necessary(CopulaFamily::constant(fgm(1.0)), 1e-5);
    CHECK_FALSE(r.pass);
    CHECK(std::abs(r.deviation - 0.0625) <= 1e-9);
    CHECK(r.witness == std::vector<double>{0.5, 0.5});
}

TEST_CASE("zero candidate sweep") {
    const CopulaFamily pi = CopulaFamily::constant(product_pi());
    CHECK(check_zero_candidate(pi, product_pi(), default_alphas(), 1e-5).pass);
    for (const Copula& u : {frechet_m(), frechet_w(), fgm(1.0)}) {
        CAPTURE(u.expression());
        const auto r = check_zero_candidate(pi, u, default_alphas(), 1e-5);
        CHECK_FALSE(r.pass);
        CHECK(r.deviation >= 1e-2);
        REQUIRE(r.witness.size() == 3);
        CHECK(r.witness[0] > 0.0);
        CHECK(r.witness[0] < 1.0);
    }
}

TEST_CASE("FGM counterexample report") {
    const auto r = fgm_counterexample(1.0, {{0.25, 0.5}, {0.5, 0.5}});
    CHECK(r.pass);
    CHECK(std::abs(r.deviation - 0.01171875) <= 1e-9);
    CHECK(r.params.at("necessary_condition") == "holds");
    // x = 1/2 alone cannot separate the product from Pi.
    CHECK_FALSE(fgm_counterexample(1.0, {{0.5, 0.5}}).pass);
    CHECK_THROWS_AS(fgm_counterexample(0.0, {{0.25, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(fgm_counterexample(1.5, {{0.25, 0.5}}), std::invalid_argument);
}

TEST_CASE("convergence study") {
    const CopulaFamily curve = CopulaFamily::fgm_curve(ThetaCurve::polynomial({-1.0, 2.0}));
    std::vector<CopulaFamily> approx;
    for (int n : {4, 8, 16}) approx.push_back(midpoint_approximation(curve, n));
    VerifyOptions opts;
    opts.lattice = 9;
    const auto r = convergence_study(curve, approx, fgm(0.5), fgm(0.5), opts);
    CHECK(r.pass);
    CHECK(r.params.at("monotone") == "yes");
    // Approximants that get worse fail the study.
    std::vector<CopulaFamily> worse{CopulaFamily::constant(fgm(0.1)), CopulaFamily::constant(fgm(0.5))};
    const auto w = convergence_study(CopulaFamily::constant(fgm(0.0)), worse, product_pi(), product_pi(), opts);
    CHECK_FALSE(w.pass);
    CHECK(w.params.at("monotone") == "no");
}

TEST_CASE("midpoint approximation") {
    const CopulaFamily curve = CopulaFamily::fgm_curve(ThetaCurve::polynomial({-1.0, 2.0}));
    const CopulaFamily m = midpoint_approximation(curve, 4);
    CHECK(m.expression() == "pw(0.25,0.5,0.75:fgm(-0.75),fgm(-0.25),fgm(0.25),fgm(0.75))");
    CHECK_THROWS_AS(midpoint_approximation(curve, 0), std::invalid_argument);
}

TEST_CASE("report formats") {
    VerificationReport r;
    r.name = "demo";
    r.pass = false;
    r.deviation = 0.0625;
    r.witness = {0.3, 0.5, 0.5};
    r.params = {{"b", "2"}, {"a", "1"}};
    CHECK(format_text({r}) == "demo | FAIL | 6.250000e-02 | (0.3, 0.5, 0.5) | a=1; b=2\n");
    const auto doc = nlohmann::json::parse(format_json({r}));
    CHECK(doc["pass"] == false);
    CHECK(doc["reports"][0]["witness"] == nlohmann::json::array({0.5, 0.5}));
    CHECK(doc["reports"][0]["params"]["witness_alpha"] == "0.3");
    CHECK(doc["reports"][0]["deviation"] == 0.0625);
}

TEST_CASE("suites") {
    CHECK_THROWS_AS(run_suite("nope"), std::invalid_argument);
    const auto fgm_suite = run_suite("fgm");
    REQUIRE(fgm_suite.size() == 1);
    CHECK(fgm_suite[0].pass);
    SuiteOptions opts;
    opts.families = {CopulaFamily::constant(fgm(1.0))};
    const auto zero = run_suite("zero-necessary", opts);
    REQUIRE(zero.size() == 1);
    CHECK_FALSE(zero[0].pass);
    CHECK(format_text(run_suite("identity")) == format_text(run_suite("identity")));
}

#include "copulas/product.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace copulas {

namespace {

double unit(double x) { return std::clamp(x, 0.0, 1.0); }

std::vector<double> product_breaks(const Copula& a, const Copula& b, double x, double y) {
    std::vector<double> breaks = a.partial2_breaks(x);
    const auto more = b.partial1_breaks(y);
    breaks.insert(breaks.end(), more.begin(), more.end());
    return breaks;
}

std::string star_name(const Copula& a, const Copula& b) {
    return "star(" + a.expression() + "," + b.expression() + ")";
}

std::string star_c_name(const Copula& a, const CopulaFamily& f, const Copula& b) {
    return "starc(" + a.expression() + "," + f.expression() + "," + b.expression() + ")";
}

// Runs the integral on a few interior points so that a pathological
// integrand fails at construction, and reports the worst error estimate.
template <typename Integrator>
double probe_error(const Integrator& integral) {
    constexpr std::array<double, 3> probes{0.25, 0.5, 0.75};
    double worst = 0.0;
    for (double x : probes) {
        for (double y : probes) worst = std::max(worst, integral(x, y).error);
    }
    return worst;
}

ProductResult quadrature_star(const Copula& a, const Copula& b, const QuadratureConfig& q) {
    q.check();
    auto integral = [a, b, q](double x, double y) { return star_integral(a, b, x, y, q); };
    const double err = probe_error(integral);
    Copula evaluator = make_computed(
        star_name(a, b), [integral](double x, double y) { return integral(x, y).value; },
        a.left_invertible() && b.left_invertible(), a.right_invertible() && b.right_invertible());
    return {std::move(evaluator), FastPath::None, err};
}

ProductResult quadrature_star_c(const Copula& a, const CopulaFamily& f, const Copula& b,
                                const QuadratureConfig& q) {
    q.check();
    auto integral = [a, f, b, q](double x, double y) { return star_c_integral(a, f, b, x, y, q); };
    const double err = probe_error(integral);
    Copula evaluator = make_computed(star_c_name(a, f, b),
                                     [integral](double x, double y) { return integral(x, y).value; });
    return {std::move(evaluator), FastPath::None, err};
}

// (B*W)(u,v) = u - B(u,1-v); the same holds for *_F.
Copula right_w(const Copula& b, std::string name) {
    return make_computed(
        std::move(name), [b](double u, double v) { return u - b.impl().eval(u, unit(1.0 - v)); },
        b.left_invertible(), b.right_invertible());
}

// (W*B)(u,v) = v - B(1-u,v).
Copula left_w(const Copula& b, std::string name) {
    return make_computed(
        std::move(name), [b](double u, double v) { return v - b.impl().eval(unit(1.0 - u), v); },
        b.left_invertible(), b.right_invertible());
}

}  // namespace

std::string_view to_string(FastPath path) {
    switch (path) {
        case FastPath::None: return "none";
        case FastPath::IdentityM: return "identity-M";
        case FastPath::ZeroPi: return "zero-Pi";
        case FastPath::WClosedForm: return "W-closed-form";
        case FastPath::InvertibleReduction: return "invertible-reduction";
        case FastPath::ShuffleClosedForm: return "shuffle-closed-form";
    }
    return "unknown";
}

Integral star_integral(const Copula& a, const Copula& b, double x, double y,
                       const QuadratureConfig& q) {
    check_unit(x, "x");
    check_unit(y, "y");
    const auto breaks = product_breaks(a, b, x, y);
    return integrate([&](double t) { return a.partial2(x, t) * b.partial1(t, y); }, breaks, q);
}

Integral star_c_integral(const Copula& a, const CopulaFamily& f, const Copula& b, double x, double y,
                         const QuadratureConfig& q) {
    check_unit(x, "x");
    check_unit(y, "y");
    auto breaks = product_breaks(a, b, x, y);
    const auto family_breaks = f.breakpoints();
    breaks.insert(breaks.end(), family_breaks.begin(), family_breaks.end());
    return integrate([&](double t) { return f.eval(t, a.partial2(x, t), b.partial1(t, y)); }, breaks,
                     q);
}

Copula shuffle_star(const ShuffleOfM& s, const Copula& c) {
    std::string name = "star(" + to_copula(s).expression() + "," + c.expression() + ")";
    return make_computed(
        std::move(name),
        [s, c](double u, double v) {
            const CopulaImpl& cc = c.impl();
            double sum = 0.0;
            for (const auto& p : s.pieces()) {
                if (p.x0 >= u) break;
                const double d = std::min(u - p.x0, p.x1 - p.x0);
                if (p.descending) {
                    sum += cc.eval(p.y1, v) - cc.eval(unit(p.y1 - d), v);
                } else {
                    sum += cc.eval(unit(p.y0 + d), v) - cc.eval(p.y0, v);
                }
            }
            return sum;
        },
        c.left_invertible(), c.right_invertible());
}

Copula star_shuffle(const Copula& c, const ShuffleOfM& s) {
    std::string name = "star(" + c.expression() + "," + to_copula(s).expression() + ")";
    const ShuffleOfM st = s.transposed();
    return make_computed(
        std::move(name),
        [st, c](double u, double v) {
            const CopulaImpl& cc = c.impl();
            double sum = 0.0;
            for (const auto& p : st.pieces()) {
                if (p.x0 >= v) break;
                const double d = std::min(v - p.x0, p.x1 - p.x0);
                if (p.descending) {
                    sum += cc.eval(u, p.y1) - cc.eval(u, unit(p.y1 - d));
                } else {
                    sum += cc.eval(u, unit(p.y0 + d)) - cc.eval(u, p.y0);
                }
            }
            return sum;
        },
        c.left_invertible(), c.right_invertible());
}

ProductResult star(const Copula& a, const Copula& b, const QuadratureConfig& q,
                   FastPathPolicy policy) {
    if (policy == FastPathPolicy::ForceQuadrature) return quadrature_star(a, b, q);
    if (a.kind() == CopulaKind::FrechetM) return {b, FastPath::IdentityM, 0.0};
    if (b.kind() == CopulaKind::FrechetM) return {a, FastPath::IdentityM, 0.0};
    if (a.kind() == CopulaKind::ProductPi || b.kind() == CopulaKind::ProductPi) {
        return {product_pi(), FastPath::ZeroPi, 0.0};
    }
    if (b.kind() == CopulaKind::FrechetW) return {right_w(a, star_name(a, b)), FastPath::WClosedForm, 0.0};
    if (a.kind() == CopulaKind::FrechetW) return {left_w(b, star_name(a, b)), FastPath::WClosedForm, 0.0};
    if (auto s = a.as_shuffle()) return {shuffle_star(*s, b), FastPath::ShuffleClosedForm, 0.0};
    if (auto s = b.as_shuffle()) return {star_shuffle(a, *s), FastPath::ShuffleClosedForm, 0.0};
    return quadrature_star(a, b, q);
}

std::optional<ProductResult> invertible_reduction(const Copula& a, const CopulaFamily& /*f*/,
                                                  const Copula& b, const QuadratureConfig& q) {
    if (!a.right_invertible() && !b.left_invertible()) return std::nullopt;
    ProductResult r = star(a, b, q);
    r.fast_path = FastPath::InvertibleReduction;
    return r;
}

ProductResult star_c(const Copula& a, const CopulaFamily& f, const Copula& b,
                     const QuadratureConfig& q, FastPathPolicy policy) {
    if (policy == FastPathPolicy::ForceQuadrature) return quadrature_star_c(a, f, b, q);
    if (a.kind() == CopulaKind::FrechetM) return {b, FastPath::IdentityM, 0.0};
    if (b.kind() == CopulaKind::FrechetM) return {a, FastPath::IdentityM, 0.0};
    if (b.kind() == CopulaKind::FrechetW) {
        return {right_w(a, star_c_name(a, f, b)), FastPath::WClosedForm, 0.0};
    }
    if (a.kind() == CopulaKind::FrechetW) {
        return {left_w(b, star_c_name(a, f, b)), FastPath::WClosedForm, 0.0};
    }
    if (auto r = invertible_reduction(a, f, b, q)) return *std::move(r);
    return quadrature_star_c(a, f, b, q);
}

}  // namespace copulas

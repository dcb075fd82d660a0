#include "copulas/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "copulas/format.hpp"

namespace copulas {

namespace {

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration on P_n, evaluated by the three-term recurrence.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double derivative = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            derivative = n * (z * p1 - p2) / (z * z - 1.0);
            const double step = p1 / derivative;
            z -= step;
            if (std::abs(step) <= 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * derivative * derivative);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

double apply_rule(const GaussLegendreRule& rule, const std::function<double(double)>& f, double a,
                  double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    return half * sum;
}

struct Refiner {
    const GaussLegendreRule& rule;
    const std::function<double(double)>& f;
    int max_depth;

    Integral run(double a, double b, double whole, double tol, int depth) const {
        const double m = 0.5 * (a + b);
        const double left = apply_rule(rule, f, a, m);
        const double right = apply_rule(rule, f, m, b);
        const double refined = left + right;
        const double diff = std::abs(refined - whole);
        if (diff <= tol || !(m > a && b > m)) return {refined, diff};
        if (depth >= max_depth) {
            throw QuadratureError("quadrature did not converge on [" + format_shortest(a) + ", " +
                                  format_shortest(b) + "]: estimate change " +
                                  format_shortest(diff) + " exceeds " + format_shortest(tol));
        }
        const Integral l = run(a, m, left, 0.5 * tol, depth + 1);
        const Integral r = run(m, b, right, 0.5 * tol, depth + 1);
        return {l.value + r.value, l.error + r.error};
    }
};

}  // namespace

void QuadratureConfig::check() const {
    if (base_subintervals < 1 || nodes_per_subinterval < 1 || max_depth < 1) {
        throw std::invalid_argument("quadrature counts must be at least 1");
    }
    if (!(adaptive_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
    for (double b : extra_breakpoints) {
        if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("breakpoint outside [0,1]");
    }
}

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_rule(n));
    return *slot;
}

Integral integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                   const QuadratureConfig& q) {
    q.check();
    std::vector<double> cuts;
    cuts.reserve(q.base_subintervals + 1 + breakpoints.size() + q.extra_breakpoints.size());
    for (int k = 0; k <= q.base_subintervals; ++k) {
        cuts.push_back(static_cast<double>(k) / q.base_subintervals);
    }
    for (double b : breakpoints) {
        if (b > 0.0 && b < 1.0) cuts.push_back(b);
    }
    for (double b : q.extra_breakpoints) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const GaussLegendreRule& rule = gauss_legendre(q.nodes_per_subinterval);
    const Refiner refiner{rule, f, q.max_depth};
    const double local_tol = q.adaptive_tol / static_cast<double>(cuts.size() - 1);
    Integral total;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        const Integral piece = refiner.run(a, b, apply_rule(rule, f, a, b), local_tol, 0);
        total.value += piece.value;
        total.error += piece.error;
    }
    return total;
}

}  // namespace copulas

#include "copulas/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace copulas {

namespace {

double lattice(std::size_t k, std::size_t n) {
    return static_cast<double>(k) / static_cast<double>(n);
}

}  // namespace

LatticeMaximum lattice_max_abs(const std::function<double(double, double)>& f,
                               std::size_t divisions) {
    if (divisions == 0) throw std::invalid_argument("lattice needs at least one division");
    LatticeMaximum best{-1.0, 0.0, 0.0};
    for (std::size_t i = 0; i <= divisions; ++i) {
        const double x = lattice(i, divisions);
        for (std::size_t j = 0; j <= divisions; ++j) {
            const double y = lattice(j, divisions);
            const double d = std::abs(f(x, y));
            if (d > best.value || std::isnan(d)) {
                best = {d, x, y};
                if (std::isnan(d)) return best;
            }
        }
    }
    return best;
}

LatticeMaximum sup_distance_witness(const Copula& a, const Copula& b, std::size_t divisions) {
    return lattice_max_abs([&](double x, double y) { return a.eval(x, y) - b.eval(x, y); },
                           divisions);
}

double sup_distance(const Copula& a, const Copula& b, std::size_t divisions) {
    return sup_distance_witness(a, b, divisions).value;
}

ValidationReport validate(const Copula& c, std::size_t divisions, double tol) {
    if (divisions < 2) throw std::invalid_argument("validation needs at least two divisions");
    const std::size_t n = divisions;
    std::vector<double> values((n + 1) * (n + 1));
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) values[i * (n + 1) + j] = c.eval(lattice(i, n), lattice(j, n));
    }
    ValidationReport report;
    report.divisions = n;
    report.tol = tol;
    auto note_boundary = [&](double err, double x, double y) {
        if (err > report.boundary_error || std::isnan(err)) {
            report.boundary_error = err;
            report.boundary_x = x;
            report.boundary_y = y;
        }
    };
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = lattice(k, n);
        note_boundary(std::abs(values[k * (n + 1)]), t, 0.0);
        note_boundary(std::abs(values[k]), 0.0, t);
        note_boundary(std::abs(values[k * (n + 1) + n] - t), t, 1.0);
        note_boundary(std::abs(values[n * (n + 1) + k] - t), 1.0, t);
    }
    report.min_volume = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double vol = values[(i + 1) * (n + 1) + j + 1] - values[(i + 1) * (n + 1) + j] -
                               values[i * (n + 1) + j + 1] + values[i * (n + 1) + j];
            if (vol < report.min_volume || std::isnan(vol)) {
                report.min_volume = vol;
                report.min_volume_x = lattice(i, n);
                report.min_volume_y = lattice(j, n);
            }
        }
    }
    report.passed = report.boundary_error <= tol && report.min_volume >= -tol;
    return report;
}

}  // namespace copulas

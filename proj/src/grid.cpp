#include "copulas/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "copulas/format.hpp"

namespace copulas {

namespace {

constexpr double kReaderMarginTolerance = 1e-6;

double lattice(std::size_t k, std::size_t n) {
    return static_cast<double>(k) / static_cast<double>(n);
}

// Cell index and fractional offset of x in [0,1]; x = 1 maps to the last cell.
std::pair<std::size_t, double> locate(double x, std::size_t n) {
    const double scaled = x * static_cast<double>(n);
    auto i = static_cast<std::size_t>(std::floor(scaled));
    if (i >= n) i = n - 1;
    return {i, scaled - static_cast<double>(i)};
}

double max_margin_error(std::size_t n, const std::vector<double>& mass) {
    const double target = 1.0 / static_cast<double>(n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        double col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += mass[i * n + j];
            col += mass[j * n + i];
        }
        worst = std::max({worst, std::abs(row - target), std::abs(col - target)});
    }
    return worst;
}

class GridImpl final : public CopulaImpl {
public:
    GridImpl(GridCopula g, std::string expression)
        : g_(std::move(g)), expression_(std::move(expression)) {}
    CopulaKind kind() const override { return CopulaKind::Grid; }
    double eval(double u, double v) const override { return g_.eval(u, v); }
    double partial1(double u, double v) const override { return g_.partial1(u, v); }
    double partial2(double u, double v) const override { return g_.partial2(u, v); }
    bool analytic_partials() const override { return true; }
    std::vector<double> partial1_breaks(double) const override { return cell_edges(); }
    std::vector<double> partial2_breaks(double) const override { return cell_edges(); }
    std::string expression() const override {
        if (!expression_.empty()) return expression_;
        return "grid(<" + std::to_string(g_.size()) + "x" + std::to_string(g_.size()) + ">)";
    }

private:
    std::vector<double> cell_edges() const {
        std::vector<double> out;
        for (std::size_t k = 1; k < g_.size(); ++k) out.push_back(lattice(k, g_.size()));
        return out;
    }
    GridCopula g_;
    std::string expression_;
};

}  // namespace

GridCopula::GridCopula(std::size_t n, std::vector<double> mass)
    : n_(n), mass_(std::move(mass)), cumulative_((n + 1) * (n + 1), 0.0) {
    for (std::size_t i = 1; i <= n_; ++i) {
        double row = 0.0;
        for (std::size_t j = 1; j <= n_; ++j) {
            row += mass_[(i - 1) * n_ + (j - 1)];
            cumulative_[i * (n_ + 1) + j] = cumulative_[(i - 1) * (n_ + 1) + j] + row;
        }
    }
}

GridCopula GridCopula::make(std::size_t n, std::vector<double> mass, double tol) {
    if (n == 0) throw std::invalid_argument("grid size must be positive");
    if (mass.size() != n * n) throw std::invalid_argument("grid mass matrix must be N x N");
    for (double m : mass) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            throw std::invalid_argument("grid masses must be finite and nonnegative");
        }
    }
    const double err = max_margin_error(n, mass);
    if (err > tol) {
        throw std::invalid_argument("grid marginals deviate from 1/N by " + format_shortest(err));
    }
    return GridCopula(n, std::move(mass));
}

double GridCopula::eval(double u, double v) const {
    const auto [i, fu] = locate(u, n_);
    const auto [j, fv] = locate(v, n_);
    const double c00 = cumulative(i, j);
    const double c01 = cumulative(i, j + 1);
    const double c10 = cumulative(i + 1, j);
    const double c11 = cumulative(i + 1, j + 1);
    const double value = (1.0 - fu) * ((1.0 - fv) * c00 + fv * c01) + fu * ((1.0 - fv) * c10 + fv * c11);
    return std::clamp(value, 0.0, 1.0);
}

double GridCopula::partial1(double u, double v) const {
    const auto [i, fu] = locate(u, n_);
    const auto [j, fv] = locate(v, n_);
    const double lower = (1.0 - fv) * cumulative(i, j) + fv * cumulative(i, j + 1);
    const double upper = (1.0 - fv) * cumulative(i + 1, j) + fv * cumulative(i + 1, j + 1);
    return std::clamp((upper - lower) * static_cast<double>(n_), 0.0, 1.0);
}

double GridCopula::partial2(double u, double v) const {
    const auto [i, fu] = locate(u, n_);
    const auto [j, fv] = locate(v, n_);
    const double lower = (1.0 - fu) * cumulative(i, j) + fu * cumulative(i + 1, j);
    const double upper = (1.0 - fu) * cumulative(i, j + 1) + fu * cumulative(i + 1, j + 1);
    return std::clamp((upper - lower) * static_cast<double>(n_), 0.0, 1.0);
}

GridCopula grid_from_copula(const Copula& c, std::size_t n) {
    if (n == 0) throw std::invalid_argument("grid size must be positive");
    std::vector<double> corner((n + 1) * (n + 1));
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) corner[i * (n + 1) + j] = c.eval(lattice(i, n), lattice(j, n));
    }
    std::vector<double> mass(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double m = corner[(i + 1) * (n + 1) + j + 1] - corner[(i + 1) * (n + 1) + j] -
                             corner[i * (n + 1) + j + 1] + corner[i * (n + 1) + j];
            if (m < -1e-12) {
                throw std::invalid_argument("negative cell volume " + format_shortest(m) +
                                            "; input is not 2-increasing");
            }
            mass[i * n + j] = std::max(m, 0.0);
        }
    }
    return GridCopula::make(n, std::move(mass), 1e-9);
}

Copula to_copula(GridCopula g, std::string expression) {
    return Copula(std::make_shared<GridImpl>(std::move(g), std::move(expression)));
}

void write_grid_csv(const GridCopula& g, std::ostream& out) {
    const std::size_t n = g.size();
    out << "N=" << n << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) out << ',';
            out << format_shortest(g.mass(i, j));
        }
        out << '\n';
    }
}

GridCopula read_grid_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("N=", 0) != 0) {
        throw std::invalid_argument("grid CSV must start with N=<int>");
    }
    std::size_t n = 0;
    {
        const char* first = line.data() + 2;
        const char* last = line.data() + line.size();
        while (last > first && (last[-1] == '\r' || last[-1] == ' ')) --last;
        auto [ptr, ec] = std::from_chars(first, last, n);
        if (ec != std::errc() || ptr != last || n == 0) {
            throw std::invalid_argument("grid CSV header has an invalid N");
        }
    }
    std::vector<double> mass;
    mass.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw std::invalid_argument("grid CSV has too few rows");
        std::stringstream row(line);
        std::string cell;
        std::size_t count = 0;
        while (std::getline(row, cell, ',')) {
            std::size_t start = cell.find_first_not_of(" \t\r");
            std::size_t stop = cell.find_last_not_of(" \t\r");
            if (start == std::string::npos) throw std::invalid_argument("grid CSV has an empty cell");
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data() + start, cell.data() + stop + 1, value);
            if (ec != std::errc() || ptr != cell.data() + stop + 1) {
                throw std::invalid_argument("grid CSV cell is not a decimal: " + cell);
            }
            if (!(value >= 0.0)) throw std::invalid_argument("grid CSV cell is negative");
            mass.push_back(value);
            ++count;
        }
        if (count != n) {
            throw std::invalid_argument("grid CSV row " + std::to_string(i + 1) + " has " +
                                        std::to_string(count) + " cells, expected " +
                                        std::to_string(n));
        }
    }
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            throw std::invalid_argument("grid CSV has trailing rows");
        }
    }
    const double err = max_margin_error(n, mass);
    if (err > kReaderMarginTolerance) {
        throw std::invalid_argument("grid CSV marginals deviate from 1/N by " + format_shortest(err));
    }
    // Alternate row and column scaling until the marginals are uniform.
    const double target = 1.0 / static_cast<double>(n);
    for (int iter = 0; iter < 200 && max_margin_error(n, mass) > 1e-14; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += mass[i * n + j];
            if (row > 0.0) {
                for (std::size_t j = 0; j < n; ++j) mass[i * n + j] *= target / row;
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i) col += mass[i * n + j];
            if (col > 0.0) {
                for (std::size_t i = 0; i < n; ++i) mass[i * n + j] *= target / col;
            }
        }
    }
    return GridCopula::make(n, std::move(mass), 1e-10);
}

GridCopula load_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file " + path.string());
    return read_grid_csv(in);
}

ShuffleOfM shuffle_from_grid(const GridCopula& g) {
    const std::size_t n = g.size();
    // x_end(i,j): right end of piece (i,j) inside column i; y_end likewise in row j.
    std::vector<double> x_end(n * n);
    std::vector<double> y_end(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        std::size_t last = 0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += g.mass(i, j);
            x_end[i * n + j] = lattice(i, n) + acc;
            if (g.mass(i, j) > 0.0) last = j;
        }
        for (std::size_t j = last; j < n; ++j) x_end[i * n + j] = lattice(i + 1, n);
    }
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        std::size_t last = 0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += g.mass(i, j);
            y_end[i * n + j] = lattice(j, n) + acc;
            if (g.mass(i, j) > 0.0) last = i;
        }
        for (std::size_t i = last; i < n; ++i) y_end[i * n + j] = lattice(j + 1, n);
    }
    std::vector<ShufflePiece> pieces;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (g.mass(i, j) <= 0.0) continue;
            const double x0 = j == 0 ? lattice(i, n) : x_end[i * n + j - 1];
            const double y0 = i == 0 ? lattice(j, n) : y_end[(i - 1) * n + j];
            pieces.push_back({x0, x_end[i * n + j], y0, y_end[i * n + j], false});
        }
    }
    return ShuffleOfM::from_pieces(std::move(pieces));
}

}  // namespace copulas

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "copulas/copula.hpp"
#include "copulas/shuffle.hpp"

namespace copulas {

/// Checkerboard copula: an N x N nonnegative mass matrix with uniform
/// marginals, evaluated by bilinear interpolation of the cumulative mass.
/// Row i is the i-th u-cell, column j the j-th v-cell.
class GridCopula {
public:
    /// Throws std::invalid_argument unless every mass is nonnegative and
    /// every row and column sums to 1/N within `tol`.
    static GridCopula make(std::size_t n, std::vector<double> mass, double tol = 1e-10);

    std::size_t size() const { return n_; }
    double mass(std::size_t i, std::size_t j) const { return mass_[i * n_ + j]; }
    std::span<const double> masses() const { return mass_; }

    double eval(double u, double v) const;
    /// Exact derivatives of the bilinear interpolant (piecewise constant in
    /// the differentiated variable, right-hand at cell edges).
    double partial1(double u, double v) const;
    double partial2(double u, double v) const;

    /// Cumulative mass C(i/N, j/N).
    double cumulative(std::size_t i, std::size_t j) const { return cumulative_[i * (n_ + 1) + j]; }

private:
    GridCopula(std::size_t n, std::vector<double> mass);

    std::size_t n_;
    std::vector<double> mass_;
    std::vector<double> cumulative_;  // (N+1) x (N+1)
};

/// mass(i,j) = C-volume of cell [i/N,(i+1)/N] x [j/N,(j+1)/N]. Rounding-level
/// negative volumes (>= -1e-12) are stored as 0.
GridCopula grid_from_copula(const Copula& c, std::size_t n);

/// `expression` names the copula in reports; a placeholder is used when empty.
Copula to_copula(GridCopula g, std::string expression = {});

/// Writes `N=<n>` followed by N rows of N comma-separated masses, each in the
/// shortest form that reads back to the same double.
void write_grid_csv(const GridCopula& g, std::ostream& out);

/// Reads the CSV format. Marginal sums must match 1/N within 1e-6; rows and
/// columns are then rebalanced to uniform marginals. Throws
/// std::invalid_argument on malformed input.
GridCopula read_grid_csv(std::istream& in);
GridCopula load_grid_csv(const std::filesystem::path& path);

/// Shuffle with the same mass as `g` on every grid cell: inside cell (i,j)
/// an ascending diagonal of length mass(i,j), stacked in column i by j and
/// in row j by i. Agrees with the grid at every lattice point, hence lies
/// within 2/N of it in sup norm.
ShuffleOfM shuffle_from_grid(const GridCopula& g);

}  // namespace copulas

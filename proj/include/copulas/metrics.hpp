#pragma once

#include <cstddef>
#include <functional>

#include "copulas/copula.hpp"

namespace copulas {

/// Largest |f| on the lattice {i/N} x {j/N}, i,j = 0..N, together with the
/// first point (row-major, x outer) attaining it.
struct LatticeMaximum {
    double value = 0.0;
    double x = 0.0;
    double y = 0.0;
};

LatticeMaximum lattice_max_abs(const std::function<double(double, double)>& f, std::size_t divisions);

/// max |A - B| over the (N+1)^2 lattice. Both arguments are 1-Lipschitz, so
/// this is within 2/N of the true sup distance.
double sup_distance(const Copula& a, const Copula& b, std::size_t divisions);
LatticeMaximum sup_distance_witness(const Copula& a, const Copula& b, std::size_t divisions);

struct ValidationReport {
    std::size_t divisions = 0;
    double tol = 0.0;
    /// Largest violation of C(u,0)=C(0,v)=0, C(u,1)=u, C(1,v)=v on the lattice.
    double boundary_error = 0.0;
    double boundary_x = 0.0;
    double boundary_y = 0.0;
    /// Smallest volume over the N x N lattice cells and the lower-left corner
    /// of the first cell attaining it.
    double min_volume = 0.0;
    double min_volume_x = 0.0;
    double min_volume_y = 0.0;
    bool passed = false;
};

/// Checks the copula axioms on the (N+1)^2 lattice. Passes iff the boundary
/// error is at most `tol` and every cell volume is at least -tol. N >= 2.
ValidationReport validate(const Copula& c, std::size_t divisions, double tol);

}  // namespace copulas

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "snls/grid.hpp"

namespace snls {

using Complex = std::complex<double>;

// Complex scalar field sampled on a SpatialGrid, flattened row-major.
struct ComplexField {
    SpatialGrid grid;
    std::vector<Complex> values;

    explicit ComplexField(const SpatialGrid& g)
        : grid(g), values(g.total_points(), Complex(0.0, 0.0))
    {
    }

    ComplexField(const SpatialGrid& g, std::vector<Complex> v);

    std::size_t size() const { return values.size(); }
};

// Sample f(x) on the grid. The span holds the d coordinates of one point.
ComplexField make_field(const SpatialGrid& grid,
                        const std::function<Complex(std::span<const double>)>& f);

// Real-valued sampling helper (potentials and weights).
std::vector<double> make_real_field(const SpatialGrid& grid,
                                    const std::function<double(std::span<const double>)>& f);

// Centered Gaussian bump amplitude * exp(-|x|^2 / (2 width^2)).
std::vector<double> gaussian_bump(const SpatialGrid& grid, double amplitude, double width);

// Gaussian initial datum with prescribed L2 norm.
ComplexField gaussian_datum(const SpatialGrid& grid, double l2_norm, double width);

// Discrete L^p norm (sum |u_i|^p h^d)^(1/p); p = infinity gives max |u_i|.
// Requires p >= 1.
double lp_norm(const ComplexField& u, double p);

// Squared L^2 norm (the conserved mass).
double mass(const ComplexField& u);

// Fraction of mass outside the core box |x|_inf <= L/4.
double boundary_mass_fraction(const ComplexField& u);

bool all_finite(const ComplexField& u);

double max_abs(const ComplexField& u);

} // namespace snls

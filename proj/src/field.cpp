#include "snls/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snls {

ComplexField::ComplexField(const SpatialGrid& g, std::vector<Complex> v)
    : grid(g), values(std::move(v))
{
    if (values.size() != grid.total_points())
        throw std::invalid_argument("field length does not match grid point count");
}

ComplexField make_field(const SpatialGrid& grid,
                        const std::function<Complex(std::span<const double>)>& f)
{
    ComplexField u(grid);
    const int d = grid.dimension();
    std::size_t idx[3] = {0, 0, 0};
    double x[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) {
        grid.unflatten(i, idx);
        for (int a = 0; a < d; ++a)
            x[a] = grid.coordinate(idx[a]);
        u.values[i] = f(std::span<const double>(x, static_cast<std::size_t>(d)));
    }
    return u;
}

std::vector<double> make_real_field(const SpatialGrid& grid,
                                    const std::function<double(std::span<const double>)>& f)
{
    std::vector<double> v(grid.total_points());
    const int d = grid.dimension();
    std::size_t idx[3] = {0, 0, 0};
    double x[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < v.size(); ++i) {
        grid.unflatten(i, idx);
        for (int a = 0; a < d; ++a)
            x[a] = grid.coordinate(idx[a]);
        v[i] = f(std::span<const double>(x, static_cast<std::size_t>(d)));
    }
    return v;
}

std::vector<double> gaussian_bump(const SpatialGrid& grid, double amplitude, double width)
{
    if (!(width > 0.0))
        throw std::invalid_argument("gaussian width must be positive");
    const double inv = 1.0 / (2.0 * width * width);
    return make_real_field(grid, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double c : x)
            r2 += c * c;
        return amplitude * std::exp(-r2 * inv);
    });
}

ComplexField gaussian_datum(const SpatialGrid& grid, double l2_norm, double width)
{
    if (!(l2_norm >= 0.0))
        throw std::invalid_argument("datum L2 norm must be nonnegative");
    auto profile = gaussian_bump(grid, 1.0, width);
    ComplexField u(grid);
    double m = 0.0;
    for (double v : profile)
        m += v * v;
    m *= grid.cell_volume();
    const double scale = (m > 0.0) ? l2_norm / std::sqrt(m) : 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        u.values[i] = Complex(scale * profile[i], 0.0);
    return u;
}

double lp_norm(const ComplexField& u, double p)
{
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& z : u.values)
            m = std::max(m, std::abs(z));
        return m;
    }
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm requires p >= 1 or p = infinity");
    double s = 0.0;
    if (p == 2.0) {
        for (const auto& z : u.values)
            s += std::norm(z);
    } else {
        for (const auto& z : u.values)
            s += std::pow(std::abs(z), p);
    }
    return std::pow(s * u.grid.cell_volume(), 1.0 / p);
}

double mass(const ComplexField& u)
{
    double s = 0.0;
    for (const auto& z : u.values)
        s += std::norm(z);
    return s * u.grid.cell_volume();
}

double boundary_mass_fraction(const ComplexField& u)
{
    const double quarter = 0.25 * u.grid.extent();
    const int d = u.grid.dimension();
    std::size_t idx[3] = {0, 0, 0};
    double total = 0.0;
    double outside = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = std::norm(u.values[i]);
        total += a;
        u.grid.unflatten(i, idx);
        for (int ax = 0; ax < d; ++ax) {
            if (std::abs(u.grid.coordinate(idx[ax])) > quarter) {
                outside += a;
                break;
            }
        }
    }
    return (total > 0.0) ? outside / total : 0.0;
}

bool all_finite(const ComplexField& u)
{
    for (const auto& z : u.values) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return false;
    }
    return true;
}

double max_abs(const ComplexField& u)
{
    double m = 0.0;
    for (const auto& z : u.values)
        m = std::max(m, std::abs(z));
    return m;
}

} // namespace snls

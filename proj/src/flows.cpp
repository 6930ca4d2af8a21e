#include "snls/flows.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace snls {

double envelope_integral(double t0, double t1, double p)
{
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    const double offset = half / std::sqrt(3.0);
    return half * (envelope_power(mid - offset, p) + envelope_power(mid + offset, p));
}

FlowParams::FlowParams(const SpatialGrid& g, double step, bool dealias_flag)
    : grid(g), dt(step), dealias(dealias_flag)
{
    if (!(dt > 0.0) || !(dt <= 0.1))
        throw std::invalid_argument("flow step must lie in (0, 0.1], got "
                                    + std::to_string(dt));
}

DampingSpec DampingSpec::none(const SpatialGrid& grid)
{
    DampingSpec d;
    d.potential.assign(grid.total_points(), 0.0);
    return d;
}

DampingSpec DampingSpec::gaussian(const SpatialGrid& grid, double amplitude, double width,
                                  double exponent, double rate)
{
    DampingSpec d;
    d.potential = gaussian_bump(grid, amplitude, width);
    d.exponent = exponent;
    d.rate = rate;
    d.validate(grid);
    return d;
}

void DampingSpec::validate(const SpatialGrid& grid) const
{
    if (potential.size() != grid.total_points())
        throw std::invalid_argument("damping potential length does not match grid");
    if (!(exponent >= 0.0))
        throw std::invalid_argument("damping exponent must be nonnegative");
    if (!(rate >= 0.0))
        throw std::invalid_argument("damping rate must be nonnegative");
}

bool DampingSpec::trivial() const
{
    for (double v : potential) {
        if (v != 0.0)
            return false;
    }
    return true;
}

namespace detail {

void nonlinear_phase(ComplexField& u, double sigma, double dt)
{
    const int d = u.grid.dimension();
    double peak = 0.0;
    if (d == 1) {
        for (auto& z : u.values) {
            const double a2 = std::norm(z);
            peak = std::max(peak, a2);
            z *= std::polar(1.0, -a2 * a2 * dt);
        }
    } else if (d == 2) {
        for (auto& z : u.values) {
            const double a2 = std::norm(z);
            peak = std::max(peak, a2);
            z *= std::polar(1.0, -a2 * dt);
        }
    } else {
        const double half_sigma = 0.5 * sigma;
        for (auto& z : u.values) {
            const double a2 = std::norm(z);
            peak = std::max(peak, a2);
            z *= std::polar(1.0, -std::pow(a2, half_sigma) * dt);
        }
    }
    if (peak > 1e12) // |u| > 1e6
        throw std::runtime_error("amplitude overflow in nonlinear phase: |u| = "
                                 + std::to_string(std::sqrt(peak)));
}

void damping_factor(ComplexField& u, const DampingSpec& damping, double t0, double t1)
{
    const double weight = damping.rate * envelope_integral(t0, t1, 2.0 * damping.exponent);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double v = damping.potential[i];
        u.values[i] *= std::exp(-weight * v * v);
    }
}

void noise_phase(ComplexField& u, const std::vector<double>& potential, double factor)
{
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double angle = -potential[i] * factor;
        if (angle != 0.0)
            u.values[i] *= std::polar(1.0, angle);
    }
}

double dissipation_rate(const ComplexField& u, const DampingSpec& damping, double t)
{
    const double env = damping.rate * envelope_power(t, 2.0 * damping.exponent);
    double s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double v = damping.potential[i];
        s += v * v * std::norm(u.values[i]);
    }
    return 2.0 * env * s * u.grid.cell_volume();
}

double weighted_mass(const ComplexField& u, const std::vector<double>& potential)
{
    double s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i)
        s += potential[i] * std::norm(u.values[i]);
    return s * u.grid.cell_volume();
}

} // namespace detail

ComplexField nls_step(const ComplexField& u, const FlowParams& params)
{
    auto khalf = SpectralMultiplier::free_evolution(params.grid, 0.5 * params.dt);
    ComplexField w = u;
    khalf.apply(w);
    detail::nonlinear_phase(w, params.sigma(), params.dt);
    if (params.dealias)
        SpectralMultiplier::dealias_projector(params.grid).apply(w);
    khalf.apply(w);
    return w;
}

ComplexField damped_nls_step(const ComplexField& u, const FlowParams& params,
                             const DampingSpec& damping, double t)
{
    damping.validate(params.grid);
    auto khalf = SpectralMultiplier::free_evolution(params.grid, 0.5 * params.dt);
    ComplexField w = u;
    khalf.apply(w);
    detail::nonlinear_phase(w, params.sigma(), params.dt);
    detail::damping_factor(w, damping, t, t + params.dt);
    if (params.dealias)
        SpectralMultiplier::dealias_projector(params.grid).apply(w);
    khalf.apply(w);
    return w;
}

ComplexField damped_linear_propagate(const ComplexField& f, double s, double t,
                                     const DampingSpec& damping, double dt)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("propagator step must be positive");
    if (t < s)
        throw std::invalid_argument("damped propagation requires s <= t");
    damping.validate(f.grid);

    ComplexField w = f;
    if (t == s)
        return w;

    const double span = t - s;
    auto full_steps = static_cast<std::size_t>(std::floor(span / dt + 1e-9));
    double remainder = span - static_cast<double>(full_steps) * dt;
    if (remainder < 1e-12 * dt)
        remainder = 0.0;

    if (full_steps > 0) {
        auto khalf = SpectralMultiplier::free_evolution(f.grid, 0.5 * dt);
        for (std::size_t k = 0; k < full_steps; ++k) {
            const double t0 = s + static_cast<double>(k) * dt;
            khalf.apply(w);
            detail::damping_factor(w, damping, t0, t0 + dt);
            khalf.apply(w);
        }
    }
    if (remainder > 0.0) {
        auto khalf = SpectralMultiplier::free_evolution(f.grid, 0.5 * remainder);
        const double t0 = s + static_cast<double>(full_steps) * dt;
        khalf.apply(w);
        detail::damping_factor(w, damping, t0, t0 + remainder);
        khalf.apply(w);
    }
    return w;
}

} // namespace snls

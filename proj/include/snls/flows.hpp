#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "snls/field.hpp"
#include "snls/fourier.hpp"

namespace snls {

// <t> = sqrt(1 + t^2)
inline double time_envelope(double t)
{
    return std::sqrt(1.0 + t * t);
}

// <t>^{-p}
inline double envelope_power(double t, double p)
{
    return std::pow(1.0 + t * t, -0.5 * p);
}

// ∫_{t0}^{t1} <tau>^{-p} dtau by two-point Gauss-Legendre quadrature
// (exact for p = 0, O(Δ^5) otherwise).
double envelope_integral(double t0, double t1, double p);

// Fixed-step parameters of the split-step flows. The nonlinearity is the
// defocusing mass-critical power sigma = 4/d, tied to the grid dimension.
struct FlowParams {
    SpatialGrid grid;
    double dt;
    bool dealias = false;

    FlowParams(const SpatialGrid& g, double step, bool dealias_flag = false);

    double sigma() const { return 4.0 / static_cast<double>(grid.dimension()); }
};

// Linear damping coefficient a(t,x) = rate * <t>^{-2 exponent} * V(x)^2.
// Damped flows use rate 1; the compensator of a phase-noise flow uses 1/2.
struct DampingSpec {
    std::vector<double> potential; // V sampled on the grid
    double exponent = 0.0;
    double rate = 1.0;

    static DampingSpec none(const SpatialGrid& grid);
    static DampingSpec gaussian(const SpatialGrid& grid, double amplitude, double width,
                                double exponent, double rate = 1.0);

    void validate(const SpatialGrid& grid) const;
    bool trivial() const;
};

// One Strang step of i u_t + Δu = |u|^sigma u over dt:
// half kinetic, exact nonlinear phase, half kinetic.
ComplexField nls_step(const ComplexField& u, const FlowParams& params);

// One Strang step of the damped equation
// i u_t + Δu = |u|^sigma u - i a(t,x) u over [t, t+dt]:
// half kinetic, nonlinear phase, exact damping factor, half kinetic.
ComplexField damped_nls_step(const ComplexField& u, const FlowParams& params,
                             const DampingSpec& damping, double t);

// Propagator H(t,s) of the damped linear equation i w_t + Δw = -i a(t,x) w,
// Strang-split at step dt with a final partial step when (t-s) is not a
// multiple of dt. Requires s <= t.
ComplexField damped_linear_propagate(const ComplexField& f, double s, double t,
                                     const DampingSpec& damping, double dt);

namespace detail {

// Shared substep kernels so every flow above and every stepper compose the
// same floating-point operations.

void nonlinear_phase(ComplexField& u, double sigma, double dt);
void damping_factor(ComplexField& u, const DampingSpec& damping, double t0, double t1);
void noise_phase(ComplexField& u, const std::vector<double>& potential, double factor);

// 2 * integral a(t,x) |u|^2 dx: the instantaneous mass-dissipation rate.
double dissipation_rate(const ComplexField& u, const DampingSpec& damping, double t);

// integral V(x) |u|^2 dx (the sqrt(V)-weighted mass).
double weighted_mass(const ComplexField& u, const std::vector<double>& potential);

} // namespace detail

} // namespace snls

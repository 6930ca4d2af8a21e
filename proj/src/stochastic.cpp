#include "snls/stochastic.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace snls {

void NoiseSpec::validate(const SpatialGrid& grid) const
{
    if (potential.size() != grid.total_points())
        throw std::invalid_argument("noise potential does not match the grid");
    for (double v : potential) {
        if (!std::isfinite(v))
            throw std::invalid_argument("noise potential must be finite");
        if (v < 0.0)
            throw std::invalid_argument("noise potential must be nonnegative");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("noise decay exponent must be nonnegative");
    if (!std::isfinite(amplitude) || amplitude < 0.0)
        throw std::invalid_argument("noise amplitude must be nonnegative");
}

bool NoiseSpec::trivial() const
{
    for (double v : potential)
        if (v != 0.0)
            return false;
    return true;
}

DampingSpec NoiseSpec::compensator() const
{
    DampingSpec d;
    d.potential = potential;
    d.exponent = gamma;
    d.rate = 0.5;
    return d;
}

NoiseSpec make_noise(const SpatialGrid& grid, double amplitude, double gamma, double width)
{
    NoiseSpec n;
    n.potential = gaussian_bump(grid, amplitude, width);
    n.gamma = gamma;
    n.amplitude = amplitude;
    n.validate(grid);
    return n;
}

namespace {

std::vector<double> pointwise_sqrt(const std::vector<double>& v)
{
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = std::sqrt(v[i]);
    return r;
}

ComplexField scaled_product(const ComplexField& u, const std::vector<double>& potential,
                            double factor)
{
    ComplexField out(u.grid);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        out.values[i] = factor * potential[i] * u.values[i];
    return out;
}

} // namespace

ComplexField snls_step(const ComplexField& u, const FlowParams& params, const NoiseSpec& noise,
                       const BrownianPath& path, std::size_t k)
{
    noise.validate(params.grid);
    const SpectralMultiplier khalf = SpectralMultiplier::free_evolution(params.grid,
                                                                        0.5 * params.dt);
    const double t_mid = (static_cast<double>(k) + 0.5) * params.dt;
    ComplexField w = u;
    khalf.apply(w);
    detail::nonlinear_phase(w, params.sigma(), params.dt);
    detail::noise_phase(w, noise.potential,
                        envelope_power(t_mid, noise.gamma) * path.increment(k));
    if (params.dealias)
        SpectralMultiplier::dealias_projector(params.grid).apply(w);
    khalf.apply(w);
    return w;
}

ComplexField stochastic_convolution_increment(const ComplexField& u, const NoiseSpec& noise,
                                              const BrownianPath& path, std::size_t k)
{
    const double t_left = static_cast<double>(k) * path.dt;
    return scaled_product(u, noise.potential,
                          envelope_power(t_left, noise.gamma) * path.increment(k));
}

SnlsStepper::SnlsStepper(const FlowParams& params, const NoiseSpec& noise, BrownianPath path)
    : Stepper(params), noise_(noise), compensator_(noise.compensator()),
      root_potential_(pointwise_sqrt(noise.potential)), path_(std::move(path)),
      khalf_(SpectralMultiplier::free_evolution(params.grid, 0.5 * params.dt))
{
    noise_.validate(params.grid);
    if (path_.dt != params.dt)
        throw std::invalid_argument("Brownian path step does not match the flow step");
}

void SnlsStepper::advance(ComplexField& u, std::size_t k) const
{
    const double t_mid = (static_cast<double>(k) + 0.5) * params_.dt;
    khalf_.apply(u);
    detail::nonlinear_phase(u, params_.sigma(), params_.dt);
    detail::noise_phase(u, noise_.potential,
                        envelope_power(t_mid, noise_.gamma) * path_.increment(k));
    if (params_.dealias)
        SpectralMultiplier::dealias_projector(params_.grid).apply(u);
    khalf_.apply(u);
}

void SnlsStepper::advance_linear(ComplexField& w, std::size_t k) const
{
    const double t0 = static_cast<double>(k) * params_.dt;
    khalf_.apply(w);
    detail::damping_factor(w, compensator_, t0, t0 + params_.dt);
    khalf_.apply(w);
}

ComplexField SnlsStepper::noise_increment(const ComplexField& u, std::size_t k) const
{
    return stochastic_convolution_increment(u, noise_, path_, k);
}

ComplexField SnlsStepper::noise_increment_root(const ComplexField& u, std::size_t k) const
{
    const double t_left = static_cast<double>(k) * params_.dt;
    return scaled_product(u, root_potential_,
                          envelope_power(t_left, noise_.gamma) * path_.increment(k));
}

ItoReferenceStepper::ItoReferenceStepper(const FlowParams& params, const NoiseSpec& noise,
                                         BrownianPath path)
    : Stepper(params), noise_(noise), compensator_(noise.compensator()),
      path_(std::move(path)),
      khalf_(SpectralMultiplier::free_evolution(params.grid, 0.5 * params.dt))
{
    noise_.validate(params.grid);
    if (path_.dt != params.dt)
        throw std::invalid_argument("Brownian path step does not match the flow step");
}

void ItoReferenceStepper::advance(ComplexField& u, std::size_t k) const
{
    const double t_left = static_cast<double>(k) * params_.dt;
    const double env = envelope_power(t_left, noise_.gamma);
    const double db = path_.increment(k);
    khalf_.apply(u);
    detail::nonlinear_phase(u, params_.sigma(), params_.dt);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double theta = env * noise_.potential[i];
        u.values[i] *= std::complex<double>(1.0 - 0.5 * theta * theta * params_.dt,
                                            -theta * db);
    }
    if (params_.dealias)
        SpectralMultiplier::dealias_projector(params_.grid).apply(u);
    khalf_.apply(u);
}

} // namespace snls

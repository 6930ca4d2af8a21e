#include "snls/trajectory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace snls {

namespace {

std::size_t aligned_step_index(double t, double dt)
{
    const double ratio = t / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-6)
        throw std::invalid_argument("checkpoint time " + std::to_string(t)
                                    + " does not align with the step grid");
    if (rounded < 0.0)
        throw std::invalid_argument("checkpoint times must be nonnegative");
    return static_cast<std::size_t>(rounded);
}

std::vector<std::size_t> checkpoint_steps(const std::vector<double>& checkpoints,
                                          double horizon, double dt)
{
    if (checkpoints.empty())
        throw std::invalid_argument("at least one checkpoint is required");
    if (checkpoints.front() != 0.0)
        throw std::invalid_argument("the first checkpoint must be t = 0");
    if (!(horizon >= 0.0))
        throw std::invalid_argument("horizon must be nonnegative");

    std::vector<std::size_t> steps;
    steps.reserve(checkpoints.size());
    double prev = -1.0;
    for (double t : checkpoints) {
        if (t <= prev && !(t == 0.0 && prev < 0.0))
            throw std::invalid_argument("checkpoint times must increase strictly");
        prev = t;
        steps.push_back(aligned_step_index(t, dt));
    }
    const std::size_t horizon_step = aligned_step_index(horizon, dt);
    if (steps.back() != horizon_step)
        throw std::invalid_argument("the final checkpoint must equal the horizon");
    return steps;
}

void check_finite(const ComplexField& u, double t)
{
    if (!all_finite(u))
        throw std::runtime_error("non-finite field at t = " + std::to_string(t));
    const double peak = max_abs(u);
    if (peak > 1e6)
        throw std::runtime_error("field amplitude overflow at t = " + std::to_string(t)
                                 + ", max |u| = " + std::to_string(peak));
}

void add_scaled(ComplexField& acc, const ComplexField& term)
{
    for (std::size_t i = 0; i < acc.values.size(); ++i)
        acc.values[i] += term.values[i];
}

} // namespace

void Stepper::advance_linear(ComplexField& w, std::size_t k) const
{
    (void)k;
    free_propagate_inplace(w, params_.dt);
}

ComplexField Stepper::noise_increment(const ComplexField& u, std::size_t k) const
{
    (void)k;
    return ComplexField(u.grid);
}

ComplexField Stepper::noise_increment_root(const ComplexField& u, std::size_t k) const
{
    (void)k;
    return ComplexField(u.grid);
}

NlsStepper::NlsStepper(const FlowParams& params)
    : Stepper(params),
      khalf_(SpectralMultiplier::free_evolution(params.grid, 0.5 * params.dt)),
      kfull_(SpectralMultiplier::free_evolution(params.grid, params.dt))
{
}

void NlsStepper::advance(ComplexField& u, std::size_t k) const
{
    (void)k;
    khalf_.apply(u);
    detail::nonlinear_phase(u, params_.sigma(), params_.dt);
    if (params_.dealias)
        SpectralMultiplier::dealias_projector(params_.grid).apply(u);
    khalf_.apply(u);
}

void NlsStepper::advance_linear(ComplexField& w, std::size_t k) const
{
    (void)k;
    kfull_.apply(w);
}

DampedNlsStepper::DampedNlsStepper(const FlowParams& params, const DampingSpec& damping)
    : Stepper(params), damping_(damping),
      khalf_(SpectralMultiplier::free_evolution(params.grid, 0.5 * params.dt))
{
    damping_.validate(params.grid);
}

void DampedNlsStepper::advance(ComplexField& u, std::size_t k) const
{
    const double t0 = static_cast<double>(k) * params_.dt;
    khalf_.apply(u);
    detail::nonlinear_phase(u, params_.sigma(), params_.dt);
    detail::damping_factor(u, damping_, t0, t0 + params_.dt);
    if (params_.dealias)
        SpectralMultiplier::dealias_projector(params_.grid).apply(u);
    khalf_.apply(u);
}

double DampedNlsStepper::dissipation_rate(const ComplexField& u, double t) const
{
    return detail::dissipation_rate(u, damping_, t);
}

void DampedNlsStepper::advance_linear(ComplexField& w, std::size_t k) const
{
    const double t0 = static_cast<double>(k) * params_.dt;
    khalf_.apply(w);
    detail::damping_factor(w, damping_, t0, t0 + params_.dt);
    khalf_.apply(w);
}

DampedLinearStepper::DampedLinearStepper(const FlowParams& params, const DampingSpec& damping)
    : Stepper(params), damping_(damping),
      khalf_(SpectralMultiplier::free_evolution(params.grid, 0.5 * params.dt))
{
    damping_.validate(params.grid);
}

void DampedLinearStepper::advance(ComplexField& u, std::size_t k) const
{
    const double t0 = static_cast<double>(k) * params_.dt;
    khalf_.apply(u);
    detail::damping_factor(u, damping_, t0, t0 + params_.dt);
    khalf_.apply(u);
}

double DampedLinearStepper::dissipation_rate(const ComplexField& u, double t) const
{
    return detail::dissipation_rate(u, damping_, t);
}

void DampedLinearStepper::advance_linear(ComplexField& w, std::size_t k) const
{
    advance(w, k);
}

std::size_t TrajectoryRecord::step_index(std::size_t checkpoint) const
{
    return aligned_step_index(times.at(checkpoint), dt);
}

std::size_t TrajectoryRecord::checkpoint_at(double t) const
{
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (std::abs(times[j] - t) <= 1e-9 * std::max(1.0, std::abs(t)))
            return j;
    }
    throw std::invalid_argument("no checkpoint at t = " + std::to_string(t));
}

namespace {

// Shared main loop: continues `rec` (holding at least the initial checkpoint)
// until the last entry of `steps` is recorded.
TrajectoryRecord run_evolve(TrajectoryRecord rec, const Stepper& stepper,
                            const std::vector<double>& checkpoints,
                            const std::vector<std::size_t>& steps, const EvolveHooks& hooks)
{
    const double dt = stepper.dt();
    const bool stochastic = stepper.stochastic();
    const bool root_weight = stochastic && stepper.stores_root_weight();
    const std::vector<double>* weight = stepper.weight_potential();

    ComplexField u = rec.fields.back();
    std::size_t k = rec.step_index(rec.checkpoints() - 1);
    double dissipation = rec.dissipation.back();
    double wmass = rec.weighted_mass.back();
    double prev_rate = stepper.dissipation_rate(u, static_cast<double>(k) * dt);
    double prev_wm = weight ? detail::weighted_mass(u, *weight) : 0.0;

    ComplexField conv(rec.grid);
    ComplexField conv_root(rec.grid);

    for (std::size_t j = rec.checkpoints(); j < checkpoints.size(); ++j) {
        const std::size_t target = steps[j];
        for (; k < target; ++k) {
            if (stochastic) {
                add_scaled(conv, stepper.noise_increment(u, k));
                if (root_weight)
                    add_scaled(conv_root, stepper.noise_increment_root(u, k));
            }
            stepper.advance(u, k);
            if (stochastic) {
                stepper.advance_linear(conv, k);
                if (root_weight)
                    stepper.advance_linear(conv_root, k);
            }
            const double t1 = static_cast<double>(k + 1) * dt;
            const double rate = stepper.dissipation_rate(u, t1);
            dissipation += 0.5 * dt * (prev_rate + rate);
            prev_rate = rate;
            if (weight) {
                const double wm = detail::weighted_mass(u, *weight);
                wmass += 0.5 * dt * (prev_wm + wm);
                prev_wm = wm;
            }
        }

        const double t = checkpoints[j];
        check_finite(u, t);
        rec.times.push_back(t);
        rec.fields.push_back(u);
        rec.mass_ledger.push_back(mass(u));
        rec.dissipation.push_back(dissipation);
        rec.weighted_mass.push_back(wmass);
        if (stochastic) {
            rec.convolution_sums.push_back(conv);
            conv = ComplexField(rec.grid);
            if (root_weight) {
                rec.convolution_sums_root.push_back(conv_root);
                conv_root = ComplexField(rec.grid);
            }
        }

        if (hooks.on_checkpoint)
            hooks.on_checkpoint(rec, k);
        if (j == hooks.halt_after_checkpoint)
            break;
    }
    return rec;
}

} // namespace

TrajectoryRecord evolve(const ComplexField& u0, const Stepper& stepper, double horizon,
                        const std::vector<double>& checkpoints, const EvolveHooks& hooks)
{
    if (!(u0.grid == stepper.params().grid))
        throw std::invalid_argument("initial field grid does not match stepper grid");
    const auto steps = checkpoint_steps(checkpoints, horizon, stepper.dt());

    TrajectoryRecord rec(u0.grid);
    rec.dt = stepper.dt();
    rec.dealias = stepper.params().dealias;
    rec.has_nonlinearity = stepper.nonlinear();
    rec.stochastic = stepper.stochastic();
    rec.associated_damping = stepper.associated_damping();
    rec.seed = stepper.seed();
    rec.noise_decay = stepper.noise_decay();
    rec.noise_amplitude = stepper.noise_amplitude();

    check_finite(u0, 0.0);
    rec.times.push_back(0.0);
    rec.fields.push_back(u0);
    rec.mass_ledger.push_back(mass(u0));
    rec.dissipation.push_back(0.0);
    rec.weighted_mass.push_back(0.0);
    if (hooks.on_checkpoint)
        hooks.on_checkpoint(rec, 0);
    if (hooks.halt_after_checkpoint == 0)
        return rec;

    return run_evolve(std::move(rec), stepper, checkpoints, steps, hooks);
}

TrajectoryRecord evolve_resume(TrajectoryRecord partial, const Stepper& stepper,
                               double horizon, const std::vector<double>& checkpoints,
                               const EvolveHooks& hooks)
{
    if (partial.checkpoints() == 0)
        throw std::invalid_argument("cannot resume an empty record");
    if (partial.dt != stepper.dt())
        throw std::invalid_argument("resume step size does not match the record");
    const auto steps = checkpoint_steps(checkpoints, horizon, stepper.dt());
    if (partial.checkpoints() > checkpoints.size())
        throw std::invalid_argument("record has more checkpoints than the requested run");
    for (std::size_t j = 0; j < partial.checkpoints(); ++j) {
        if (std::abs(partial.times[j] - checkpoints[j]) > 1e-9)
            throw std::invalid_argument("recorded checkpoints do not prefix the requested run");
    }
    if (partial.checkpoints() == checkpoints.size())
        return partial;
    return run_evolve(std::move(partial), stepper, checkpoints, steps, hooks);
}

} // namespace snls

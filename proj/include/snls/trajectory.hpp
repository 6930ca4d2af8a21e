#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "snls/flows.hpp"

namespace snls {

// One step of a time-discretized flow on the global grid t_k = k * dt.
class Stepper {
public:
    explicit Stepper(const FlowParams& params) : params_(params) {}
    virtual ~Stepper() = default;

    const FlowParams& params() const { return params_; }
    double dt() const { return params_.dt; }

    // Advance u from t_k to t_{k+1}.
    virtual void advance(ComplexField& u, std::size_t k) const = 0;

    // Instantaneous mass-dissipation rate 2 * integral a(t,x)|u|^2 dx.
    virtual double dissipation_rate(const ComplexField& u, double t) const
    {
        (void)u;
        (void)t;
        return 0.0;
    }

    // Linear part of the flow (the propagator diagnostics compose).
    virtual DampingSpec associated_damping() const
    {
        return DampingSpec::none(params_.grid);
    }

    // Advance the associated linear propagator one step.
    virtual void advance_linear(ComplexField& w, std::size_t k) const;

    // Whether the flow includes the power nonlinearity (the Duhamel
    // reconstruction needs to know).
    virtual bool nonlinear() const { return true; }

    // Noise bookkeeping; deterministic flows report false / zero.
    virtual bool stochastic() const { return false; }
    virtual ComplexField noise_increment(const ComplexField& u, std::size_t k) const;
    virtual ComplexField noise_increment_root(const ComplexField& u, std::size_t k) const;
    virtual bool stores_root_weight() const { return false; }
    virtual std::uint64_t seed() const { return 0; }
    virtual double noise_decay() const { return 0.0; }
    virtual double noise_amplitude() const { return 0.0; }

    // The sqrt(V)-weighted mass uses this potential (empty when absent).
    virtual const std::vector<double>* weight_potential() const { return nullptr; }

protected:
    FlowParams params_;
};

// Deterministic mass-critical NLS.
class NlsStepper : public Stepper {
public:
    explicit NlsStepper(const FlowParams& params);
    void advance(ComplexField& u, std::size_t k) const override;
    void advance_linear(ComplexField& w, std::size_t k) const override;

private:
    SpectralMultiplier khalf_;
    SpectralMultiplier kfull_;
};

// Damped NLS with coefficient rate * <t>^{-2 exponent} V^2.
class DampedNlsStepper : public Stepper {
public:
    DampedNlsStepper(const FlowParams& params, const DampingSpec& damping);
    void advance(ComplexField& u, std::size_t k) const override;
    double dissipation_rate(const ComplexField& u, double t) const override;
    DampingSpec associated_damping() const override { return damping_; }
    void advance_linear(ComplexField& w, std::size_t k) const override;
    const std::vector<double>* weight_potential() const override
    {
        return &damping_.potential;
    }

private:
    DampingSpec damping_;
    SpectralMultiplier khalf_;
};

// Damped linear flow only (no nonlinearity): the propagator H as a stepper.
class DampedLinearStepper : public Stepper {
public:
    DampedLinearStepper(const FlowParams& params, const DampingSpec& damping);
    bool nonlinear() const override { return false; }
    void advance(ComplexField& u, std::size_t k) const override;
    double dissipation_rate(const ComplexField& u, double t) const override;
    DampingSpec associated_damping() const override { return damping_; }
    void advance_linear(ComplexField& w, std::size_t k) const override;
    const std::vector<double>* weight_potential() const override
    {
        return &damping_.potential;
    }

private:
    DampingSpec damping_;
    SpectralMultiplier khalf_;
};

// Checkpointed history of one run. Checkpoint j covers t = times[j]; the
// interval arrays (convolution sums) have one entry per checkpoint interval
// [times[j], times[j+1]).
struct TrajectoryRecord {
    SpatialGrid grid;
    double dt = 0.0;
    bool dealias = false;
    bool has_nonlinearity = true;

    std::vector<double> times;
    std::vector<ComplexField> fields;
    std::vector<double> mass_ledger;    // ||u(t_k)||_2^2
    std::vector<double> dissipation;    // trapezoid of the dissipation rate
    std::vector<double> weighted_mass;  // trapezoid of integral V |u|^2 dx

    // Stochastic flows: sum over steps born in interval j of the Ito
    // integrand increment, each propagated by the associated linear flow to
    // the interval's right endpoint.
    bool stochastic = false;
    std::vector<ComplexField> convolution_sums;
    std::vector<ComplexField> convolution_sums_root; // sqrt(V)-weighted variant
    DampingSpec associated_damping;

    std::uint64_t seed = 0;
    double noise_decay = 0.0;
    double noise_amplitude = 0.0;

    explicit TrajectoryRecord(const SpatialGrid& g)
        : grid(g), associated_damping(DampingSpec::none(g))
    {
    }

    std::size_t checkpoints() const { return times.size(); }
    std::size_t step_index(std::size_t checkpoint) const;
    std::size_t checkpoint_at(double t) const; // exact match required
};

struct EvolveHooks {
    // Called after checkpoint j lands in the record; next_step is the global
    // step index that would run next.
    std::function<void(const TrajectoryRecord&, std::size_t next_step)> on_checkpoint;
    // Stop (cleanly) once this checkpoint index has been recorded.
    std::size_t halt_after_checkpoint = std::numeric_limits<std::size_t>::max();
};

// Run the stepper from t = 0 to the horizon, recording at the checkpoint
// times. Checkpoints must start at 0, increase strictly, align with the step
// grid, and end at the horizon.
TrajectoryRecord evolve(const ComplexField& u0, const Stepper& stepper, double horizon,
                        const std::vector<double>& checkpoints,
                        const EvolveHooks& hooks = {});

// Continue a partial record (as produced by a halted evolve) to completion.
// The full checkpoint list must extend the one already recorded.
TrajectoryRecord evolve_resume(TrajectoryRecord partial, const Stepper& stepper,
                               double horizon, const std::vector<double>& checkpoints,
                               const EvolveHooks& hooks = {});

} // namespace snls

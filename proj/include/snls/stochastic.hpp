#pragma once

#include <cstdint>
#include <vector>

#include "snls/brownian.hpp"
#include "snls/trajectory.hpp"

namespace snls {

// Multiplicative phase noise: the coupling -i u <t>^{-gamma} V(x) dB_t in Ito
// form together with its correction -1/2 <t>^{-2gamma} V^2 u dt. The pair is
// one Stratonovich phase unit, integrated exactly as
// u <- u * exp(-i V <t_mid>^{-gamma} dB_k), which preserves |u| pointwise.
struct NoiseSpec {
    std::vector<double> potential; // amplitude-scaled bump, V(x) >= 0
    double gamma = 0.0;
    double amplitude = 0.0; // kept for reporting

    void validate(const SpatialGrid& grid) const;
    bool trivial() const;

    // The damping 1/2 <t>^{-2gamma} V^2 absorbed by the linear propagator the
    // Duhamel identity composes.
    DampingSpec compensator() const;
};

// V(x) = amplitude * exp(-|x|^2 / (2 width^2)).
NoiseSpec make_noise(const SpatialGrid& grid, double amplitude, double gamma, double width);

// One Strang step over [t_k, t_{k+1}]: half kinetic, exact nonlinear phase,
// noise phase with the midpoint envelope, half kinetic.
ComplexField snls_step(const ComplexField& u, const FlowParams& params, const NoiseSpec& noise,
                       const BrownianPath& path, std::size_t k);

// Left-point Ito integrand increment <t_k>^{-gamma} V u(t_k) dB_k, the unit
// the stochastic-convolution diagnostics propagate and sum.
ComplexField stochastic_convolution_increment(const ComplexField& u, const NoiseSpec& noise,
                                              const BrownianPath& path, std::size_t k);

// Phase-exact integrator of the noisy flow along one Brownian path.
class SnlsStepper : public Stepper {
public:
    SnlsStepper(const FlowParams& params, const NoiseSpec& noise, BrownianPath path);

    void advance(ComplexField& u, std::size_t k) const override;
    bool stochastic() const override { return true; }
    DampingSpec associated_damping() const override { return compensator_; }
    void advance_linear(ComplexField& w, std::size_t k) const override;
    ComplexField noise_increment(const ComplexField& u, std::size_t k) const override;
    ComplexField noise_increment_root(const ComplexField& u, std::size_t k) const override;
    bool stores_root_weight() const override { return true; }
    std::uint64_t seed() const override { return path_.key; }
    double noise_decay() const override { return noise_.gamma; }
    double noise_amplitude() const override { return noise_.amplitude; }
    const std::vector<double>* weight_potential() const override { return &noise_.potential; }

    const BrownianPath& path() const { return path_; }

private:
    NoiseSpec noise_;
    DampingSpec compensator_;
    std::vector<double> root_potential_; // sqrt(V), for the weighted variant
    BrownianPath path_;
    SpectralMultiplier khalf_;
};

// Literal Ito discretization of the same flow: Euler-Maruyama noise term plus
// the explicit -1/2 theta^2 dt correction, theta = <t_k>^{-gamma} V. First
// order in the noise; exists to cross-check the phase-exact stepper.
class ItoReferenceStepper : public Stepper {
public:
    ItoReferenceStepper(const FlowParams& params, const NoiseSpec& noise, BrownianPath path);

    void advance(ComplexField& u, std::size_t k) const override;
    bool stochastic() const override { return true; }
    DampingSpec associated_damping() const override { return compensator_; }
    std::uint64_t seed() const override { return path_.key; }
    double noise_decay() const override { return noise_.gamma; }
    double noise_amplitude() const override { return noise_.amplitude; }

private:
    NoiseSpec noise_;
    DampingSpec compensator_;
    BrownianPath path_;
    SpectralMultiplier khalf_;
};

} // namespace snls

#pragma once

#include <vector>

#include "snls/field.hpp"

namespace snls {

// In-place unnormalized DFTs (forward kernel e^{-i xi.x}). The inverse here
// already folds in the 1/N^d factor, so inverse(forward(u)) == u up to
// roundoff. Thread-safe; plan bookkeeping is internal.
void dft_forward(const SpatialGrid& grid, Complex* data);
void dft_inverse(const SpatialGrid& grid, Complex* data);

// Diagonal Fourier-space operator: values indexed like the transformed field.
struct SpectralMultiplier {
    SpatialGrid grid;
    std::vector<Complex> symbol;

    SpectralMultiplier(const SpatialGrid& g, std::vector<Complex> s);

    // Symbol e^{-i t |xi|^2}: the free Schrodinger group over time t.
    static SpectralMultiplier free_evolution(const SpatialGrid& grid, double t);

    // Sharp 2/3-rule anti-aliasing projector.
    static SpectralMultiplier dealias_projector(const SpatialGrid& grid);

    // u <- F^{-1} (symbol . F u)
    void apply(ComplexField& u) const;
};

// e^{itΔ} u0 (t of either sign; t = 0 returns the input unchanged).
ComplexField free_propagate(const ComplexField& u0, double t);

// Apply e^{itΔ} in place.
void free_propagate_inplace(ComplexField& u, double t);

// Discrete Parseval check helper: (1/N^d) sum |Fu|^2 h^d.
double spectral_mass(const ComplexField& u);

struct DecaySample {
    double time;
    double sup_norm;       // ||e^{itΔ}u0||_inf
    double companion;      // t^{d/2} * sup_norm
};

// Free evolution sup-norm decay at the given times (positive, increasing).
std::vector<DecaySample> dispersive_decay_profile(const ComplexField& u0,
                                                  const std::vector<double>& times);

// Least-squares slope of log(sup) against log(t) for a profile.
double fitted_decay_exponent(const std::vector<DecaySample>& profile);

} // namespace snls

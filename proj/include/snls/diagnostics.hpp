#pragma once

#include <string>
#include <vector>

#include "snls/brownian.hpp"
#include "snls/strichartz.hpp"
#include "snls/trajectory.hpp"

namespace snls {

// Max over checkpoints of |m_k - m_0| / m_0 (0 for the zero trajectory).
double mass_ledger_check(const TrajectoryRecord& rec);

// Max over checkpoints of |m_k + D_k - m_0| / m_0, the discrete form of
// d/dt ||u||_2^2 = -2 integral a(t,x)|u|^2 dx. Rejects records whose
// dissipation column is missing.
double dissipation_ledger_check(const TrajectoryRecord& rec);

// L_t^q L_x^p norm over the window [a, b], left-endpoint in time on the
// checkpoint grid; q = inf takes the max over checkpoints in the window.
double strichartz_time_norm(const TrajectoryRecord& rec, const StrichartzPair& pair,
                            double a, double b);

// Which stored convolution increments a maximal-function pass consumes: the
// plain potential V or its square root (the weighted gauge).
enum class ConvolutionWeight { full, root };

struct MaximalRecord {
    double time = 0.0;
    double value = 0.0;
    double beta = 2.0;

    // Norm of the propagated partial sum over [times[a], times[b]), one row
    // per checkpoint pair a < b <= index(time).
    struct PairValue {
        std::size_t a = 0;
        std::size_t b = 0;
        double value = 0.0;
    };
    std::vector<PairValue> pairs;
};

// sup over checkpoint pairs (a, b) with b <= t of the L^beta norm of the
// stochastic convolution over [a, b), every stored increment propagated to
// the evaluation time by the record's linear flow.
MaximalRecord maximal_function(const TrajectoryRecord& rec, double beta, double t,
                               ConvolutionWeight weight = ConvolutionWeight::full);

// The same quantity at every checkpoint time in one pass.
std::vector<MaximalRecord> maximal_curve(const TrajectoryRecord& rec, double beta,
                                         ConvolutionWeight weight = ConvolutionWeight::full);

// Relative gap at b between the recorded field and the reconstruction
// H(b,a)u(a) - i (trapezoid of H |u|^sigma u) - i (stored noise increments
// propagated to b). Window endpoints must be checkpoints.
double duhamel_residual(const TrajectoryRecord& rec, double a, double b);

// Monte Carlo ratio of E[sup_b |sum sigma dB|^rho]^{1/rho} against
// E[(sum sigma^2 dt)^{rho/2}]^{1/rho} over the given paths; 0 when the
// denominator vanishes. rho must lie in [2, inf).
double burkholder_ratio(const std::vector<BrownianPath>& paths,
                        const std::vector<std::vector<double>>& integrands, double rho,
                        double horizon);

struct ScatteringSample {
    double time = 0.0;
    double cauchy_increment = 0.0; // ||v(t_{k+1}) - v(t_k)||_2, 0 on the last row
    double residual = 0.0;         // ||v(t_k) - v(t_K)||_2
};

// Pullbacks v(t_k) = e^{-i t_k Delta} u(t_k), their Cauchy increments, and
// the residual against the final pullback. Requires a horizon of at least 4.
std::vector<ScatteringSample> scattering_residual(const TrajectoryRecord& rec);

// Exponent chain 1/a_{n+1} = 1/a_n + eps0/10 reported down to its stopping
// value 2 (the last entry is clamped there). Requires a0 > 2 and eps0 > 0.
std::vector<double> iteration_exponents(double alpha0, double eps0);

// Per-checkpoint CSV: time, mass, dissipation, l2, linf, strichartz_window,
// m0, scattering_residual. Doubles carry 17 significant digits. The m0
// column needs the propagation pass, so it is filled only when requested
// (and only for stochastic records).
std::string trajectory_ledger_csv(const TrajectoryRecord& rec, const StrichartzPair& pair,
                                  bool with_maximal);

} // namespace snls

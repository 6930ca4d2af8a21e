#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "snls/stochastic.hpp"
#include "snls/strichartz.hpp"
#include "snls/trajectory.hpp"

namespace snls {

// L_omega^rho moment over the uniform measure on the paths:
// ((1/P) sum v_i^rho)^(1/rho); rho = inf takes the max. Requires rho in
// [1, inf], a nonempty list, and nonnegative finite entries.
double omega_moment(const std::vector<double>& values, double rho);

// One Monte Carlo study: P independent noise realizations of the same flow,
// path i driven by the stream key (master_seed, i).
struct EnsembleSpec {
    SpatialGrid grid;
    double dt = 1e-3;
    double horizon = 1.0;
    std::vector<double> checkpoints;
    bool dealias = false;

    ComplexField initial; // shared deterministic datum
    NoiseSpec noise;
    StrichartzPair pair;

    std::size_t paths = 8;
    std::uint64_t master_seed = 1;
    std::vector<double> rho_list = {1.5, 2.0};
    std::size_t workers = 1;

    // The maximal-function column costs a quadratic propagation pass per
    // path; sweeps switch it off.
    bool with_maximal = true;

    EnsembleSpec(const SpatialGrid& g, ComplexField u0, NoiseSpec n, StrichartzPair sp)
        : grid(g), initial(std::move(u0)), noise(std::move(n)), pair(sp)
    {
    }

    void validate() const;
};

// Scalar diagnostics of one finished path. Halted and failed paths keep
// zeroed columns; the status tells them apart.
struct PathDiagnostics {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool completed = false;
    bool halted = false;
    std::string error; // empty unless the path aborted

    double mass_drift = 0.0;
    double strichartz_full = 0.0;   // [0, T]
    double strichartz_window = 0.0; // [T/2, T]
    double m0_final = 0.0;          // maximal function at the horizon
    double scattering_residual = 0.0; // at the last interior checkpoint, T >= 4
};

struct EnsembleReport {
    std::size_t paths = 0;
    std::uint64_t master_seed = 0;
    double horizon = 0.0;
    std::vector<double> rho_list;

    std::vector<PathDiagnostics> table; // sorted by path index
    std::vector<std::string> diagnostic_names;
    std::vector<std::vector<double>> moments; // [diagnostic][rho], completed paths

    bool partial = false; // some path aborted
    bool halted = false;  // some path stopped at the halt checkpoint

    std::string ensemble_csv() const;
    std::string moments_csv() const;
};

// Optional orchestration points. The callbacks run on worker threads, at
// most once per path and never twice for one index; callers synchronize any
// shared state of their own.
struct EnsembleHooks {
    // Forwarded to every path's evolve loop.
    std::size_t halt_after_checkpoint = std::numeric_limits<std::size_t>::max();
    // When set, a returned partial record resumes that path in place of a
    // fresh start.
    std::function<std::optional<TrajectoryRecord>(std::size_t)> resume;
    // Observes each path's record right after it finishes (or halts).
    std::function<void(std::size_t, const TrajectoryRecord&)> on_path_record;
};

// Runs the fan-out. The report (and any CSV built from it) is a function of
// the spec alone: worker count and completion order never change a byte.
EnsembleReport run_ensemble(const EnsembleSpec& spec, const EnsembleHooks& hooks = {});

// One horizon slice of a decay-exponent sweep.
struct SweepRow {
    double gamma = 0.0;
    double horizon = 0.0;
    double strichartz_full = 0.0;   // L_omega^q L_t^q L_x^p over [0, T]
    double strichartz_window = 0.0; // same norm over [T/2, T]
    double window_se = 0.0;         // delta-method standard error
    double scattering_residual = 0.0; // ensemble mean at T
};

// Reruns the base ensemble once per gamma (maximal pass off) and tabulates
// the windowed space-time norms and residuals at each requested horizon.
// Horizons must be checkpoint times of the base spec.
std::vector<SweepRow> gamma_sweep(const EnsembleSpec& base, const std::vector<double>& gammas,
                                  const std::vector<double>& horizons);

std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace snls

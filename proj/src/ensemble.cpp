#include "snls/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "snls/diagnostics.hpp"

namespace snls {

namespace {

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* const kDiagnosticNames[] = {"mass_drift", "strichartz_full", "strichartz_window",
                                        "m0", "scattering_residual"};

double path_column(const PathDiagnostics& row, std::size_t which)
{
    switch (which) {
    case 0: return row.mass_drift;
    case 1: return row.strichartz_full;
    case 2: return row.strichartz_window;
    case 3: return row.m0_final;
    default: return row.scattering_residual;
    }
}

PathDiagnostics run_one_path(const EnsembleSpec& spec, const EnsembleHooks& hooks,
                             std::size_t index)
{
    PathDiagnostics row;
    row.index = index;
    row.seed = stream_key(spec.master_seed, index);
    try {
        SnlsStepper stepper(FlowParams(spec.grid, spec.dt, spec.dealias), spec.noise,
                            sample_path(row.seed, spec.dt, spec.horizon));
        EvolveHooks evolve_hooks;
        evolve_hooks.halt_after_checkpoint = hooks.halt_after_checkpoint;

        std::optional<TrajectoryRecord> partial;
        if (hooks.resume)
            partial = hooks.resume(index);
        TrajectoryRecord rec =
            partial ? evolve_resume(std::move(*partial), stepper, spec.horizon,
                                    spec.checkpoints, evolve_hooks)
                    : evolve(spec.initial, stepper, spec.horizon, spec.checkpoints,
                             evolve_hooks);

        row.halted = rec.checkpoints() < spec.checkpoints.size();
        row.completed = !row.halted;
        if (row.completed) {
            row.mass_drift = mass_ledger_check(rec);
            row.strichartz_full =
                strichartz_time_norm(rec, spec.pair, 0.0, spec.horizon);
            row.strichartz_window =
                strichartz_time_norm(rec, spec.pair, 0.5 * spec.horizon, spec.horizon);
            if (spec.with_maximal)
                row.m0_final =
                    maximal_function(rec, spec.pair.p.as_double(), spec.horizon).value;
            if (spec.horizon >= 4.0) {
                const auto rows = scattering_residual(rec);
                row.scattering_residual = rows[rows.size() - 2].residual;
            }
        }
        if (hooks.on_path_record)
            hooks.on_path_record(index, rec);
    } catch (const std::exception& e) {
        row.completed = false;
        row.halted = false;
        row.error = e.what();
    }
    return row;
}

} // namespace

double omega_moment(const std::vector<double>& values, double rho)
{
    if (values.empty())
        throw std::invalid_argument("moment of an empty sample");
    if (std::isnan(rho) || rho < 1.0)
        throw std::invalid_argument("moment exponent must lie in [1, inf]");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("moments take nonnegative finite samples");

    if (std::isinf(rho))
        return *std::max_element(values.begin(), values.end());
    double acc = 0.0;
    for (double v : values)
        acc += std::pow(v, rho);
    return std::pow(acc / static_cast<double>(values.size()), 1.0 / rho);
}

void EnsembleSpec::validate() const
{
    if (paths == 0)
        throw std::invalid_argument("ensemble needs at least one path");
    if (workers == 0)
        throw std::invalid_argument("ensemble needs at least one worker");
    if (rho_list.empty())
        throw std::invalid_argument("ensemble needs at least one moment exponent");
    for (double rho : rho_list)
        if (std::isnan(rho) || rho < 1.0)
            throw std::invalid_argument("moment exponents must lie in [1, inf]");
    if (initial.grid.total_points() != grid.total_points()
        || initial.grid.dimension() != grid.dimension())
        throw std::invalid_argument("initial datum lives on a different grid");
    noise.validate(grid);
    if (!is_admissible(pair.q, pair.p, grid.dimension()))
        throw std::invalid_argument("ensemble pair fails Strichartz admissibility");
    FlowParams(grid, dt, dealias); // step-size constraints
}

EnsembleReport run_ensemble(const EnsembleSpec& spec, const EnsembleHooks& hooks)
{
    spec.validate();

    EnsembleReport report;
    report.paths = spec.paths;
    report.master_seed = spec.master_seed;
    report.horizon = spec.horizon;
    report.rho_list = spec.rho_list;
    report.table.resize(spec.paths);

    std::atomic<std::size_t> cursor{0};
    auto drain = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= spec.paths)
                return;
            report.table[i] = run_one_path(spec, hooks, i);
        }
    };

    const std::size_t crew_size = std::min(spec.workers, spec.paths);
    if (crew_size <= 1) {
        drain();
    } else {
        std::vector<std::thread> crew;
        crew.reserve(crew_size);
        for (std::size_t w = 0; w < crew_size; ++w)
            crew.emplace_back(drain);
        for (auto& t : crew)
            t.join();
    }

    for (const auto& row : report.table) {
        report.partial |= !row.completed && !row.halted;
        report.halted |= row.halted;
    }

    for (std::size_t d = 0; d < 5; ++d)
        report.diagnostic_names.emplace_back(kDiagnosticNames[d]);
    std::vector<double> sample;
    report.moments.assign(5, std::vector<double>(spec.rho_list.size(), 0.0));
    for (std::size_t d = 0; d < 5; ++d) {
        sample.clear();
        for (const auto& row : report.table)
            if (row.completed)
                sample.push_back(path_column(row, d));
        if (sample.empty())
            continue;
        for (std::size_t r = 0; r < spec.rho_list.size(); ++r)
            report.moments[d][r] = omega_moment(sample, spec.rho_list[r]);
    }
    return report;
}

std::string EnsembleReport::ensemble_csv() const
{
    std::string csv =
        "path,seed,status,mass_drift,strichartz_full,strichartz_window,m0,"
        "scattering_residual\n";
    for (const auto& row : table) {
        csv += std::to_string(row.index);
        csv += ',';
        csv += std::to_string(row.seed);
        csv += ',';
        csv += row.completed ? "ok" : (row.halted ? "halted" : "failed");
        for (std::size_t d = 0; d < 5; ++d) {
            csv += ',';
            csv += fmt(path_column(row, d));
        }
        csv += '\n';
    }
    return csv;
}

std::string EnsembleReport::moments_csv() const
{
    std::string csv = "diagnostic,rho,value\n";
    for (std::size_t d = 0; d < diagnostic_names.size(); ++d)
        for (std::size_t r = 0; r < rho_list.size(); ++r) {
            csv += diagnostic_names[d];
            csv += ',';
            csv += fmt(rho_list[r]);
            csv += ',';
            csv += fmt(moments[d][r]);
            csv += '\n';
        }
    return csv;
}

std::vector<SweepRow> gamma_sweep(const EnsembleSpec& base, const std::vector<double>& gammas,
                                  const std::vector<double>& horizons)
{
    base.validate();
    if (gammas.empty() || horizons.empty())
        throw std::invalid_argument("sweep needs decay exponents and horizons");
    for (double g : gammas)
        if (!(g >= 0.0) || !std::isfinite(g))
            throw std::invalid_argument("decay exponents must be finite and nonnegative");
    for (double T : horizons) {
        const bool listed = std::any_of(base.checkpoints.begin(), base.checkpoints.end(),
                                        [T](double t) { return std::abs(t - T) <= 1e-9; });
        if (!listed)
            throw std::invalid_argument("sweep horizons must be checkpoint times");
    }

    const double rho = base.pair.q.as_double();
    std::vector<SweepRow> rows;
    for (double gamma : gammas) {
        EnsembleSpec spec = base;
        spec.noise.gamma = gamma;
        spec.with_maximal = false;

        const std::size_t H = horizons.size();
        std::vector<std::vector<double>> full(H, std::vector<double>(spec.paths, 0.0));
        std::vector<std::vector<double>> window(H, std::vector<double>(spec.paths, 0.0));
        std::vector<std::vector<double>> residual(H, std::vector<double>(spec.paths, 0.0));

        EnsembleHooks hooks;
        hooks.on_path_record = [&](std::size_t i, const TrajectoryRecord& rec) {
            if (rec.checkpoints() != spec.checkpoints.size())
                return;
            const ComplexField plus =
                free_propagate(rec.fields.back(), -rec.times.back());
            for (std::size_t h = 0; h < H; ++h) {
                const double T = horizons[h];
                full[h][i] = strichartz_time_norm(rec, spec.pair, 0.0, T);
                window[h][i] = strichartz_time_norm(rec, spec.pair, 0.5 * T, T);
                ComplexField gap = free_propagate(rec.fields[rec.checkpoint_at(T)], -T);
                for (std::size_t j = 0; j < gap.values.size(); ++j)
                    gap.values[j] -= plus.values[j];
                residual[h][i] = lp_norm(gap, 2.0);
            }
        };

        const auto report = run_ensemble(spec, hooks);
        if (report.partial)
            throw std::runtime_error("sweep path aborted; see the per-path table");

        for (std::size_t h = 0; h < H; ++h) {
            SweepRow row;
            row.gamma = gamma;
            row.horizon = horizons[h];
            row.strichartz_full = omega_moment(full[h], rho);
            row.strichartz_window = omega_moment(window[h], rho);

            // Delta-method error bar for m^(1/rho) with m the mean of v^rho.
            const double P = static_cast<double>(spec.paths);
            double m = 0.0;
            for (double v : window[h])
                m += std::pow(v, rho) / P;
            double var = 0.0;
            for (double v : window[h])
                var += (std::pow(v, rho) - m) * (std::pow(v, rho) - m);
            if (spec.paths > 1 && m > 0.0) {
                var /= P * (P - 1.0);
                row.window_se = std::pow(m, (1.0 - rho) / rho) * std::sqrt(var) / rho;
            }

            double mean_res = 0.0;
            for (double v : residual[h])
                mean_res += v / P;
            row.scattering_residual = mean_res;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::string csv = "gamma,horizon,strichartz_full,strichartz_window,window_se,"
                      "scattering_residual\n";
    for (const auto& row : rows) {
        csv += fmt(row.gamma);
        csv += ',';
        csv += fmt(row.horizon);
        csv += ',';
        csv += fmt(row.strichartz_full);
        csv += ',';
        csv += fmt(row.strichartz_window);
        csv += ',';
        csv += fmt(row.window_se);
        csv += ',';
        csv += fmt(row.scattering_residual);
        csv += '\n';
    }
    return csv;
}

} // namespace snls

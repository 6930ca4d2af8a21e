#include "snls/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "snls/checkpoint.hpp"
#include "snls/diagnostics.hpp"
#include "snls/fourier.hpp"

namespace snls {

namespace {

namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mass fraction beyond |x|_inf = L/4 above this is worth flagging: the box
// no longer holds the solution comfortably.
constexpr double kBoundaryWarning = 1e-4;

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt6(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void write_text(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

// Collects PASS/FAIL lines for summary.txt; any FAIL drives exit code 1.
struct Checks {
    std::string lines;
    bool all_pass = true;

    void require(bool ok, const std::string& what)
    {
        lines += ok ? "PASS: " : "FAIL: ";
        lines += what;
        lines += '\n';
        all_pass &= ok;
    }

    void note(const std::string& what)
    {
        lines += "note: ";
        lines += what;
        lines += '\n';
    }

    void warn(const std::string& what)
    {
        lines += "warning: ";
        lines += what;
        lines += '\n';
    }
};

double linf(const ComplexField& u) { return lp_norm(u, kInf); }

// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

// Shared halt/resume plumbing for ensemble-backed presets. Partial records
// produced by a halt are serialized under <outdir>/state; a resume directory
// feeds them back so the finished run matches an uninterrupted one.
EnsembleHooks state_hooks(const ExperimentConfig& cfg, const EnsembleSpec& spec,
                          const fs::path& outdir, const std::string& resume_dir,
                          std::function<void(std::size_t, const TrajectoryRecord&)> observe = {})
{
    EnsembleHooks hooks;
    hooks.halt_after_checkpoint = cfg.halt_checkpoint;
    if (!resume_dir.empty()) {
        const std::string state_dir = (fs::path(resume_dir) / "state").string();
        hooks.resume = [state_dir, &spec](std::size_t i) -> std::optional<TrajectoryRecord> {
            const auto file = path_state_name(state_dir, i);
            if (!fs::exists(file))
                return std::nullopt;
            return load_path_state(file, spec, i);
        };
    }
    const bool may_halt = cfg.halt_checkpoint != std::numeric_limits<std::size_t>::max();
    fs::path state_dir;
    if (may_halt) {
        state_dir = outdir / "state";
        fs::create_directories(state_dir);
    }
    hooks.on_path_record = [may_halt, state_dir, &spec,
                            observe = std::move(observe)](std::size_t i,
                                                          const TrajectoryRecord& rec) {
        if (may_halt && rec.checkpoints() < spec.checkpoints.size())
            save_path_state(rec, i, path_state_name(state_dir.string(), i));
        if (observe)
            observe(i, rec);
    };
    return hooks;
}

// Maps a finished ensemble onto the common exit statuses. Returns the exit
// code to use, 0 meaning "go on and evaluate the preset's checks".
int triage_report(const EnsembleReport& report, const EnsembleSpec& spec, Checks& checks)
{
    if (report.partial) {
        for (const auto& row : report.table)
            if (!row.completed && !row.halted)
                checks.lines += "abort: path " + std::to_string(row.index) + " (seed "
                                + std::to_string(row.seed) + "): " + row.error + "\n";
        return kRunAborted;
    }
    if (report.halted) {
        checks.note("run halted at the configured checkpoint; path states saved under state/");
        return kRunHalted;
    }
    return kRunPassed;
}

void run_mass_check(const ExperimentConfig& cfg, const std::string& resume_dir,
                    const fs::path& outdir, Checks& checks, int& exit_code)
{
    auto spec = ensemble_spec_of(cfg);
    auto report = run_ensemble(spec, state_hooks(cfg, spec, outdir, resume_dir));
    write_text(outdir / "ensemble.csv", report.ensemble_csv());
    write_text(outdir / "moments.csv", report.moments_csv());
    exit_code = triage_report(report, spec, checks);
    if (exit_code != kRunPassed)
        return;

    double worst = 0.0;
    for (const auto& row : report.table)
        worst = std::max(worst, row.mass_drift);
    checks.require(worst <= 1e-9, "max relative mass drift over all paths and checkpoints = "
                                      + fmt6(worst) + " (bound 1e-09)");
}

void run_dissipation_check(const ExperimentConfig& cfg, const fs::path& outdir, Checks& checks)
{
    const auto grid = make_grid(cfg.dimension, cfg.extent, cfg.points);
    const auto u0 = gaussian_datum(grid, cfg.data_mass, cfg.data_width);
    const auto damping = DampingSpec::gaussian(grid, cfg.damping_amplitude, cfg.damping_width,
                                               cfg.damping_exponent, 1.0);
    double residual[2] = {0.0, 0.0};
    std::string csv = "dt,residual\n";
    for (int k = 0; k < 2; ++k) {
        const double dt = k == 0 ? cfg.dt : 0.5 * cfg.dt;
        DampedNlsStepper stepper(FlowParams(grid, dt, cfg.dealias), damping);
        const auto rec = evolve(u0, stepper, cfg.horizon, cfg.checkpoints);
        residual[k] = dissipation_ledger_check(rec);
        csv += fmt(dt) + "," + fmt(residual[k]) + "\n";
        if (k == 0)
            write_text(outdir / "trajectory.csv",
                       trajectory_ledger_csv(rec, cfg.pair, false));
    }
    write_text(outdir / "dissipation.csv", csv);

    checks.require(residual[0] <= 1e-4, "dissipation ledger residual at dt = "
                                            + fmt6(residual[0]) + " (bound 0.0001)");
    const double ratio = residual[1] > 0.0 ? residual[0] / residual[1] : kInf;
    checks.require(ratio >= 3.3 && ratio <= 4.7,
                   "residual ratio under dt halving = " + fmt6(ratio)
                       + " (second-order window [3.3, 4.7])");
}

void run_dispersive_check(const ExperimentConfig& cfg, const fs::path& outdir, Checks& checks)
{
    // Flat-amplitude spreading in d = 1 against the exact Gaussian profile.
    const auto grid1 = make_grid(1, cfg.extent, cfg.points);
    const auto u0 = gaussian_datum(grid1, cfg.data_mass, cfg.data_width);
    const double peak = linf(u0);
    const double w4 = std::pow(cfg.data_width, 4.0);
    double worst = 0.0;
    std::string csv = "time,scaled_sup,oracle\n";
    ComplexField last(grid1);
    for (double t = 1.0; t <= cfg.horizon + 1e-9; t += 1.0) {
        const auto ut = free_propagate(u0, t);
        const double sup = std::sqrt(t) * linf(ut);
        const double oracle = std::sqrt(t) * peak * std::pow(w4 / (w4 + 4.0 * t * t), 0.25);
        worst = std::max(worst, std::abs(sup - oracle) / oracle);
        csv += fmt(t) + "," + fmt(sup) + "," + fmt(oracle) + "\n";
        last = ut;
    }
    write_text(outdir / "dispersive1d.csv", csv);
    checks.require(worst <= 0.01, "sqrt(t) * sup vs closed form, max relative error = "
                                      + fmt6(worst) + " (bound 0.01)");
    const double leak = boundary_mass_fraction(last);
    if (leak > kBoundaryWarning)
        checks.warn("boundary mass fraction " + fmt6(leak)
                    + " at the final time; the box may be too small for this horizon");

    // Fitted L^inf decay exponent in d = 3 (3/2 for genuinely dispersing data).
    const auto grid3 = make_grid(3, 32.0, 64);
    const auto v0 = gaussian_datum(grid3, 1.0, 0.8);
    std::vector<double> lt;
    std::vector<double> ls;
    std::string csv3 = "time,sup\n";
    for (double t = 1.0; t <= 4.0 + 1e-9; t += 0.5) {
        const double sup = linf(free_propagate(v0, t));
        lt.push_back(std::log(t));
        ls.push_back(std::log(sup));
        csv3 += fmt(t) + "," + fmt(sup) + "\n";
    }
    write_text(outdir / "dispersive3d.csv", csv3);
    const double exponent = -fitted_slope(lt, ls);
    checks.require(std::abs(exponent - 1.5) <= 0.15,
                   "fitted d=3 decay exponent = " + fmt6(exponent)
                       + " (within 10% of 1.5)");
}

void run_duhamel_check(const ExperimentConfig& cfg, const fs::path& outdir, Checks& checks)
{
    const auto grid = make_grid(cfg.dimension, cfg.extent, cfg.points);
    const auto u0 = gaussian_datum(grid, cfg.data_mass, cfg.data_width);
    const auto noise = make_noise(grid, cfg.noise_amplitude, cfg.noise_gamma, cfg.noise_width);
    const auto seed = stream_key(cfg.master_seed, 0);

    // One frozen driving path; the coarse run consumes its pairwise sums so
    // both resolutions see the same noise. Checkpoints track the step size
    // (20 steps per interval) so the reconstruction window refines with dt.
    const auto fine_path = sample_path(seed, 0.5 * cfg.dt, cfg.horizon);
    const auto coarse_path = fine_path.coarsen(2);

    double residual[2] = {0.0, 0.0};
    std::string csv = "dt,residual\n";
    for (int k = 0; k < 2; ++k) {
        const double dt = k == 0 ? cfg.dt : 0.5 * cfg.dt;
        const auto steps = static_cast<std::size_t>(std::llround(cfg.horizon / (20.0 * dt)));
        const auto cps = uniform_checkpoints(cfg.horizon, steps);
        SnlsStepper stepper(FlowParams(grid, dt, cfg.dealias), noise,
                            k == 0 ? coarse_path : fine_path);
        const auto rec = evolve(u0, stepper, cfg.horizon, cps);
        residual[k] = duhamel_residual(rec, 0.0, cfg.horizon);
        csv += fmt(dt) + "," + fmt(residual[k]) + "\n";
    }
    write_text(outdir / "duhamel.csv", csv);

    checks.require(residual[0] <= 5e-3, "mild-form reconstruction gap at the horizon = "
                                            + fmt6(residual[0]) + " (bound 0.005)");
    const double ratio = residual[1] > 0.0 ? residual[0] / residual[1] : kInf;
    checks.require(ratio >= 1.7, "gap contraction under dt halving = " + fmt6(ratio)
                                     + " (bound 1.7)");
}

void run_gamma_sweep(const ExperimentConfig& cfg, const fs::path& outdir, Checks& checks)
{
    auto spec = ensemble_spec_of(cfg);
    const auto rows = gamma_sweep(spec, cfg.sweep_gammas, cfg.sweep_horizons);
    write_text(outdir / "sweep.csv", sweep_csv(rows));

    // Ordering is asserted at the longest horizon: the windowed space-time
    // norm must not increase with the decay exponent, one combined Monte
    // Carlo standard error of slack. gamma = 0 rows are reported only.
    const double target = *std::max_element(cfg.sweep_horizons.begin(),
                                            cfg.sweep_horizons.end());
    struct Entry {
        double gamma;
        double value;
        double se;
    };
    std::vector<Entry> at_target;
    for (const auto& row : rows)
        if (row.horizon == target && row.gamma > 0.0)
            at_target.push_back({row.gamma, row.strichartz_window, row.window_se});
    std::sort(at_target.begin(), at_target.end(),
              [](const Entry& a, const Entry& b) { return a.gamma > b.gamma; });
    for (std::size_t i = 0; i + 1 < at_target.size(); ++i) {
        const auto& hi = at_target[i];
        const auto& lo = at_target[i + 1];
        const double slack = std::sqrt(hi.se * hi.se + lo.se * lo.se);
        checks.require(hi.value <= lo.value + slack,
                       "windowed norm non-increasing in gamma: value(" + fmt6(hi.gamma)
                           + ") = " + fmt6(hi.value) + " <= value(" + fmt6(lo.gamma)
                           + ") = " + fmt6(lo.value) + " + " + fmt6(slack));
    }
    for (const auto& row : rows)
        if (row.horizon == target && row.gamma == 0.0)
            checks.note("gamma = 0 windowed norm " + fmt6(row.strichartz_window)
                        + " (se " + fmt6(row.window_se) + "), reported without assertion");
}

void run_scattering_study(const ExperimentConfig& cfg, const std::string& resume_dir,
                          const fs::path& outdir, Checks& checks, int& exit_code)
{
    auto spec = ensemble_spec_of(cfg);
    spec.with_maximal = false; // the pullback study reads fields, not noise sums

    const double early = 5.0;
    const double late = 40.0;
    for (double probe : {early, late}) {
        bool found = false;
        for (double t : spec.checkpoints)
            found |= t == probe;
        if (!found)
            throw ConfigError("flow.checkpoints: the scattering study probes the residual "
                              "at t = 5 and t = 40, so both must be checkpoints");
    }

    std::vector<std::vector<ScatteringSample>> samples(spec.paths);
    auto observe = [&](std::size_t i, const TrajectoryRecord& rec) {
        if (rec.checkpoints() == spec.checkpoints.size())
            samples[i] = scattering_residual(rec);
    };
    auto report = run_ensemble(spec, state_hooks(cfg, spec, outdir, resume_dir, observe));
    write_text(outdir / "ensemble.csv", report.ensemble_csv());
    write_text(outdir / "moments.csv", report.moments_csv());
    exit_code = triage_report(report, spec, checks);
    if (exit_code != kRunPassed)
        return;

    std::string csv = "path,time,residual,cauchy_increment\n";
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (const auto& s : samples[i])
            csv += std::to_string(i) + "," + fmt(s.time) + "," + fmt(s.residual) + ","
                   + fmt(s.cauchy_increment) + "\n";
    write_text(outdir / "scattering.csv", csv);

    // Mean residual must drop to a fifth between the early and late probe
    // times, and the pullback increments must decrease past t = 2 in at
    // least 7/8 of the paths.
    double mean_early = 0.0;
    double mean_late = 0.0;
    std::size_t monotone = 0;
    for (const auto& rows : samples) {
        std::vector<double> tail;
        for (const auto& s : rows) {
            if (s.time == early)
                mean_early += s.residual / static_cast<double>(samples.size());
            if (s.time == late)
                mean_late += s.residual / static_cast<double>(samples.size());
            if (s.time >= 2.0 && s.cauchy_increment > 0.0)
                tail.push_back(s.cauchy_increment);
        }
        bool decreasing = tail.size() >= 2;
        for (std::size_t k = 0; k + 1 < tail.size(); ++k)
            decreasing &= tail[k + 1] < tail[k];
        monotone += decreasing;
    }
    const std::size_t needed = (7 * spec.paths + 7) / 8;
    checks.require(mean_late <= 0.2 * mean_early,
                   "mean pullback residual " + fmt6(mean_late) + " at t = 40 <= 0.2 x "
                       + fmt6(mean_early) + " at t = 5");
    checks.require(monotone >= needed,
                   "pullback increments decreasing past t = 2 in "
                       + std::to_string(monotone) + "/" + std::to_string(spec.paths)
                       + " paths (need " + std::to_string(needed) + ")");
}

void run_burkholder_check(const ExperimentConfig& cfg, const fs::path& outdir, Checks& checks)
{
    std::string csv = "master_seed,ratio,ratio_squared\n";
    for (std::uint64_t master : {cfg.master_seed, cfg.master_seed + 1}) {
        std::vector<BrownianPath> paths;
        paths.reserve(cfg.paths);
        for (std::size_t i = 0; i < cfg.paths; ++i)
            paths.push_back(sample_path(stream_key(master, i), cfg.dt, cfg.horizon));
        const std::vector<std::vector<double>> flat(
            cfg.paths, std::vector<double>(paths.front().steps(), 1.0));
        const double ratio = burkholder_ratio(paths, flat, 2.0, cfg.horizon);
        csv += std::to_string(master) + "," + fmt(ratio) + "," + fmt(ratio * ratio) + "\n";
        checks.require(ratio * ratio <= 4.5,
                       "martingale sup-moment ratio squared = " + fmt6(ratio * ratio)
                           + " at master seed " + std::to_string(master)
                           + " (Doob bound 4 plus slack)");
    }
    write_text(outdir / "burkholder.csv", csv);
}

} // namespace

EnsembleSpec ensemble_spec_of(const ExperimentConfig& c)
{
    const auto grid = make_grid(c.dimension, c.extent, c.points);
    EnsembleSpec spec(grid, gaussian_datum(grid, c.data_mass, c.data_width),
                      make_noise(grid, c.noise_amplitude, c.noise_gamma, c.noise_width),
                      c.pair);
    spec.dt = c.dt;
    spec.horizon = c.horizon;
    spec.checkpoints = c.checkpoints;
    spec.dealias = c.dealias;
    spec.paths = c.paths;
    spec.master_seed = c.master_seed;
    spec.rho_list = c.rho_list;
    spec.workers = c.workers;
    return spec;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& resume_dir)
{
    validate_config(config);
    const fs::path outdir(config.output_dir);
    fs::create_directories(outdir);
    write_text(outdir / "resolved.config", print_config(config));

    Checks checks;
    int exit_code = kRunPassed;
    checks.note(std::string("experiment ") + experiment_name(config.experiment));
    try {
        const bool path_state = config.experiment == ExperimentKind::MassCheck
                                || config.experiment == ExperimentKind::ScatteringStudy;
        if (!path_state
            && config.halt_checkpoint != std::numeric_limits<std::size_t>::max())
            throw ConfigError("run.halt_checkpoint: only ensemble presets (mass-check, "
                              "scattering-study) can halt and resume");
        if (!path_state && !resume_dir.empty())
            throw ConfigError("resume: only ensemble presets (mass-check, "
                              "scattering-study) can halt and resume");
        switch (config.experiment) {
        case ExperimentKind::MassCheck:
            run_mass_check(config, resume_dir, outdir, checks, exit_code);
            break;
        case ExperimentKind::DissipationCheck:
            run_dissipation_check(config, outdir, checks);
            break;
        case ExperimentKind::DispersiveCheck:
            run_dispersive_check(config, outdir, checks);
            break;
        case ExperimentKind::DuhamelCheck:
            run_duhamel_check(config, outdir, checks);
            break;
        case ExperimentKind::GammaSweep:
            run_gamma_sweep(config, outdir, checks);
            break;
        case ExperimentKind::ScatteringStudy:
            run_scattering_study(config, resume_dir, outdir, checks, exit_code);
            break;
        case ExperimentKind::BurkholderCheck:
            run_burkholder_check(config, outdir, checks);
            break;
        }
    } catch (const std::exception& e) {
        checks.lines += std::string("abort: ") + e.what() + "\n";
        exit_code = kRunAborted;
    }

    if (exit_code == kRunPassed && !checks.all_pass)
        exit_code = kRunFailed;
    checks.lines += "exit " + std::to_string(exit_code) + "\n";
    write_text(outdir / "summary.txt", checks.lines);
    return {exit_code, checks.lines};
}

} // namespace snls

// Acceptance gate for the laboratory: ten end-to-end criteria, one
// [PASS]/[FAIL] line each, every tolerance pinned beside the check that
// enforces it. Criteria 1-7 drive the library directly with the parameters
// written out below; criteria 8-10 drive full preset studies through
// run_experiment and re-derive the headline statistics from the tables the
// runs emit. Exit status 0 only when all ten pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "snls/brownian.hpp"
#include "snls/config.hpp"
#include "snls/diagnostics.hpp"
#include "snls/ensemble.hpp"
#include "snls/experiments.hpp"
#include "snls/field.hpp"
#include "snls/flows.hpp"
#include "snls/fourier.hpp"
#include "snls/grid.hpp"
#include "snls/rational.hpp"
#include "snls/stochastic.hpp"
#include "snls/strichartz.hpp"
#include "snls/trajectory.hpp"

namespace fs = std::filesystem;
using namespace snls;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw std::runtime_error(what);
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

const fs::path& scratch()
{
    static const fs::path root = fs::temp_directory_path() / "snls_acceptance";
    return root;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot read " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Numeric rows of a comma-separated table, header line dropped.
std::vector<std::vector<double>> parse_csv(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    bool header = true;
    while (std::getline(lines, line)) {
        if (header || line.empty()) {
            header = false;
            continue;
        }
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ','))
            row.push_back(std::strtod(field.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

double l2_gap(const ComplexField& a, const ComplexField& b)
{
    ComplexField diff = a;
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff.values[i] -= b.values[i];
    return lp_norm(diff, 2.0);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// 1. Mass is conserved path by path: eight noisy runs on the standard box,
//    every checkpoint of every path within 1e-9 of the initial mass, and the
//    whole study inside a minute.
std::string criterion_mass()
{
    const auto start = Clock::now();
    const auto grid = make_grid(1, 64.0, 256);
    EnsembleSpec spec(grid, gaussian_datum(grid, 1.0, 2.0), make_noise(grid, 1.0, 0.1, 2.0),
                      default_pair(1));
    spec.dt = 1e-3;
    spec.horizon = 10.0;
    spec.checkpoints = uniform_checkpoints(10.0, 10);
    spec.paths = 8;
    spec.master_seed = 1;

    const auto report = run_ensemble(spec);
    require(!report.partial && !report.halted, "ensemble did not complete");
    double worst = 0.0;
    for (const auto& row : report.table) {
        require(row.completed, "path " + std::to_string(row.index) + " did not complete");
        worst = std::max(worst, row.mass_drift);
    }
    const double secs = seconds_since(start);
    require(worst <= 1e-9,
            "max relative mass drift " + fmt(worst) + " exceeds 1e-9");
    require(secs <= 60.0, "runtime " + fmt(secs) + " s exceeds 60 s");
    return "max relative mass drift " + fmt(worst) + " over 8 paths and 11 checkpoints "
           "(bound 1e-9), " + fmt(secs) + " s (bound 60)";
}

// 2. The damped flow balances its books: mass lost plus dissipation
//    integral stays within 1e-4 of the initial mass, and the residual is
//    second order (halving dt shrinks it by 3.3x to 4.7x).
std::string criterion_dissipation()
{
    const auto grid = make_grid(1, 64.0, 256);
    const ComplexField u0 = gaussian_datum(grid, 1.0, 2.0);
    const auto damping = DampingSpec::gaussian(grid, 0.1, 2.0, 0.5);
    const auto cps = uniform_checkpoints(5.0, 10);

    double residual[2];
    for (int k = 0; k < 2; ++k) {
        const double dt = k == 0 ? 1e-3 : 5e-4;
        DampedNlsStepper stepper(FlowParams(grid, dt), damping);
        const auto rec = evolve(u0, stepper, 5.0, cps);
        residual[k] = dissipation_ledger_check(rec);
    }
    const double ratio = residual[0] / residual[1];
    require(residual[0] <= 1e-4,
            "balance residual " + fmt(residual[0]) + " at dt = 1e-3 exceeds 1e-4");
    require(ratio >= 3.3 && ratio <= 4.7,
            "refinement ratio " + fmt(ratio) + " outside [3.3, 4.7]");
    return "balance residual " + fmt(residual[0]) + " at dt = 1e-3 (bound 1e-4), "
           "refinement ratio " + fmt(ratio) + " in [3.3, 4.7]";
}

// 3. The free propagator decays at the dispersive rate: in one dimension the
//    sup norm tracks the closed form for a Gaussian within 1% across
//    t in [1, 20]; in three dimensions the fitted decay exponent sits within
//    10% of 3/2.
std::string criterion_dispersive()
{
    const auto grid1 = make_grid(1, 256.0, 1024);
    const double width = 2.0;
    const ComplexField u0 = gaussian_datum(grid1, 1.0, width);
    const double amp = max_abs(u0);
    const double w4 = width * width * width * width;
    double worst = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double t = static_cast<double>(k);
        const double scaled = std::sqrt(t) * lp_norm(free_propagate(u0, t), kInf);
        const double exact = std::sqrt(t) * amp * std::pow(w4 / (w4 + 4.0 * t * t), 0.25);
        worst = std::max(worst, std::abs(scaled - exact) / exact);
    }
    require(worst <= 0.01,
            "scaled sup norm deviates " + fmt(worst) + " from the closed form (bound 1%)");

    const auto grid3 = make_grid(3, 32.0, 64);
    const ComplexField v0 = gaussian_datum(grid3, 1.0, 0.8);
    std::vector<double> logt, logsup;
    for (double t = 1.0; t <= 4.01; t += 0.5) {
        logt.push_back(std::log(t));
        logsup.push_back(std::log(lp_norm(free_propagate(v0, t), kInf)));
    }
    const double exponent = -least_squares_slope(logt, logsup);
    require(std::abs(exponent - 1.5) <= 0.15,
            "fitted decay exponent " + fmt(exponent) + " deviates from 3/2 beyond 10%");
    return "closed-form sup decay within " + fmt(worst) + " for t in [1, 20] (bound 1%); "
           "fitted 3d exponent " + fmt(exponent) + " vs 3/2 (bound 10%)";
}

// 4. Exponent-pair admissibility agrees with exact integer arithmetic: the
//    workhorse pair is accepted, the forbidden planar endpoint is rejected,
//    and one hundred generated rational pairs match an independent
//    cross-multiplied predicate.
std::string criterion_admissibility()
{
    require(is_admissible(Rational(14, 3), Rational(14, 5), 3),
            "(14/3, 14/5) must be admissible in dimension 3");
    require(!is_admissible(Rational::integer(2), Rational::infinity(), 2),
            "(2, inf) must be rejected in dimension 2");

    // Independent predicate on raw integer fractions qn/qd and pn/pd
    // (pd == 0 encodes an infinite exponent): the exponents lie in [2, inf],
    // the pair is not the forbidden planar endpoint, and the scaling
    // identity 2/q + d/p = d/2 holds after cross-multiplication.
    const auto exact = [](long long qn, long long qd, long long pn, long long pd, int d) {
        const bool q_inf = qd == 0;
        const bool p_inf = pd == 0;
        if (!q_inf && qn < 2 * qd)
            return false;
        if (!p_inf && pn < 2 * pd)
            return false;
        if (d == 2 && !q_inf && qn == 2 * qd && p_inf)
            return false;
        if (q_inf && p_inf)
            return false;
        if (q_inf)
            return pn == 2 * pd;
        if (p_inf)
            return 4 * qd == static_cast<long long>(d) * qn;
        return 4 * qd * pn + 2LL * d * pd * qn == static_cast<long long>(d) * qn * pn;
    };

    const std::uint64_t key = 424242;
    const auto draw = [&](std::uint64_t counter, long long lo, long long hi) {
        const double u = uniform_at(key, counter); // in (0, 1]
        return lo + static_cast<long long>((1.0 - u) * static_cast<double>(hi - lo + 1));
    };

    std::size_t agreed = 0;
    std::size_t admitted = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const int d = 1 + static_cast<int>(i % 3);
        const long long qn = draw(8 * i, 1, 48);
        const long long qd = draw(8 * i + 1, 1, 12);
        long long pn = 1, pd = 1;
        const long long spare = static_cast<long long>(d) * qn - 4 * qd;
        if (i % 4 <= 1 && spare > 0) {
            // solve the identity for p, perturbing every other solution
            pn = 2LL * d * qn + (i % 4 == 1 ? 1 : 0);
            pd = spare;
        } else if (i % 4 <= 1 && spare == 0) {
            pn = 1;
            pd = 0;
        } else if (i % 8 == 6) {
            pn = 1;
            pd = 0;
        } else {
            pn = draw(8 * i + 2, 1, 48);
            pd = draw(8 * i + 3, 1, 12);
        }
        const Rational q(qn, qd);
        const Rational p = pd == 0 ? Rational::infinity() : Rational(pn, pd);
        const bool lib = is_admissible(q, p, d);
        require(lib == exact(qn, qd, pn, pd, d),
                "disagreement at (" + q.str() + ", " + p.str() + "), dimension "
                    + std::to_string(d));
        agreed += 1;
        admitted += lib;
    }
    require(agreed == 100, "expected 100 comparisons");
    require(admitted >= 10, "generator produced too few admissible pairs to be informative");
    return "workhorse pair accepted, planar endpoint rejected; 100 random rational pairs "
           "agree with exact arithmetic (" + std::to_string(admitted) + " admissible)";
}

// 5. Strong self-convergence on a frozen driving path: with the same
//    Brownian increments summed onto coarser grids, the terminal gap between
//    the dt and dt/2 solutions exceeds the gap between dt/2 and dt/4 by at
//    least 1.7x.
std::string criterion_self_convergence()
{
    const auto grid = make_grid(1, 32.0, 128);
    const ComplexField u0 = gaussian_datum(grid, 1.0, 1.5);
    const auto noise = make_noise(grid, 0.5, 0.5, 1.0);
    const double horizon = 2.0;
    const double dt = 1e-3;
    const auto finest = sample_path(stream_key(2026, 0), dt / 4.0, horizon);

    const auto solve = [&](std::size_t factor) {
        const auto path = factor == 1 ? finest : finest.coarsen(factor);
        SnlsStepper stepper(FlowParams(grid, dt / 4.0 * static_cast<double>(factor)), noise,
                            path);
        ComplexField u = u0;
        for (std::size_t k = 0; k < path.steps(); ++k)
            stepper.advance(u, k);
        return u;
    };
    const ComplexField coarse = solve(4);
    const ComplexField mid = solve(2);
    const ComplexField fine = solve(1);
    const double upper = l2_gap(coarse, mid);
    const double lower = l2_gap(mid, fine);
    require(lower > 0.0, "refined gap vanished");
    const double ratio = upper / lower;
    require(ratio >= 1.7, "halving gap ratio " + fmt(ratio) + " below 1.7");
    return "terminal gaps " + fmt(upper) + " (dt vs dt/2) and " + fmt(lower)
           + " (dt/2 vs dt/4) on a frozen path, ratio " + fmt(ratio) + " (bound 1.7)";
}

// 6. The recorded noisy trajectory satisfies its own mild formulation: the
//    reconstruction residual at t = 2 stays under 5e-3 at dt = 1e-3 and
//    shrinks by at least 1.7x when dt halves (the stored convolution sums
//    refine with the step).
std::string criterion_duhamel()
{
    const auto grid = make_grid(1, 32.0, 64);
    const ComplexField u0 = gaussian_datum(grid, 1.0, 2.0);
    const auto noise = make_noise(grid, 0.002, 0.5, 2.0);
    const double horizon = 2.0;
    const auto finest = sample_path(stream_key(1, 0), 5e-4, horizon);

    double residual[2];
    for (int k = 0; k < 2; ++k) {
        const double dt = k == 0 ? 1e-3 : 5e-4;
        const auto path = k == 0 ? finest.coarsen(2) : finest;
        SnlsStepper stepper(FlowParams(grid, dt), noise, path);
        const auto intervals = static_cast<std::size_t>(std::llround(horizon / (20.0 * dt)));
        const auto rec = evolve(u0, stepper, horizon, uniform_checkpoints(horizon, intervals));
        residual[k] = duhamel_residual(rec, 0.0, horizon);
    }
    const double ratio = residual[0] / residual[1];
    require(residual[0] <= 5e-3,
            "reconstruction residual " + fmt(residual[0]) + " at dt = 1e-3 exceeds 5e-3");
    require(ratio >= 1.7, "halving ratio " + fmt(ratio) + " below 1.7");
    return "reconstruction residual " + fmt(residual[0]) + " at dt = 1e-3 (bound 5e-3), "
           "halving ratio " + fmt(ratio) + " (bound 1.7)";
}

// 7. The discrete stochastic integral obeys the sup-moment bound: with unit
//    integrand and rho = 2, the squared Monte Carlo ratio of the running-sup
//    moment to the quadratic-variation moment stays below 4.5 (the constant
//    4 plus sampling slack) for two independent master seeds.
std::string criterion_burkholder()
{
    const double horizon = 1.0;
    const double dt = 1e-3;
    const std::size_t count = 4096;

    std::vector<double> squares;
    for (std::uint64_t master : {1ULL, 2ULL}) {
        std::vector<BrownianPath> paths;
        paths.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            paths.push_back(sample_path(stream_key(master, i), dt, horizon));
        const std::vector<std::vector<double>> unit(
            count, std::vector<double>(paths.front().steps(), 1.0));
        const double ratio = burkholder_ratio(paths, unit, 2.0, horizon);
        require(ratio * ratio <= 4.5,
                "squared sup-moment ratio " + fmt(ratio * ratio) + " at master seed "
                    + std::to_string(master) + " exceeds 4.5");
        squares.push_back(ratio * ratio);
    }
    return "squared sup-moment ratio " + fmt(squares[0]) + " and " + fmt(squares[1])
           + " across master seeds, 4096 paths each (bound 4.5)";
}

// 8. The defocusing quintic flow with decaying noise scatters: over the full
//    preset study the ensemble-mean pullback residual at t = 40 drops below
//    a fifth of its t = 5 value, the pullback increments decrease past t = 2
//    in at least 14 of 16 paths, and the study finishes inside ten minutes.
std::string criterion_scattering()
{
    const auto start = Clock::now();
    auto cfg = preset_config(ExperimentKind::ScatteringStudy);
    require(cfg.dimension == 1 && cfg.paths == 16, "preset must run 16 one-dimensional paths");
    require(cfg.data_mass == 0.5 && cfg.noise_gamma == 0.3,
            "preset datum or noise decay drifted");
    cfg.output_dir = (scratch() / "scattering").string();
    const auto result = run_experiment(cfg);
    require(result.exit_code == 0, "study exited " + std::to_string(result.exit_code));

    // re-derive the trend from the emitted table: path,time,residual,increment
    const auto rows = parse_csv(slurp(fs::path(cfg.output_dir) / "scattering.csv"));
    double early = 0.0, late = 0.0;
    std::vector<std::vector<double>> tails(cfg.paths);
    for (const auto& row : rows) {
        require(row.size() == 4, "malformed scattering table row");
        const auto path = static_cast<std::size_t>(row[0]);
        require(path < cfg.paths, "path index out of range");
        if (row[1] == 5.0)
            early += row[2];
        if (row[1] == 40.0)
            late += row[2];
        if (row[1] >= 2.0 && row[3] > 0.0)
            tails[path].push_back(row[3]);
    }
    early /= static_cast<double>(cfg.paths);
    late /= static_cast<double>(cfg.paths);
    std::size_t monotone = 0;
    for (const auto& tail : tails) {
        bool decreasing = tail.size() >= 2;
        for (std::size_t k = 0; k + 1 < tail.size(); ++k)
            decreasing = decreasing && tail[k + 1] < tail[k];
        monotone += decreasing;
    }
    const double secs = seconds_since(start);
    require(late <= 0.2 * early,
            "mean residual ratio r(40)/r(5) = " + fmt(late / early) + " exceeds 0.2");
    require(monotone >= 14, "increments decreasing in only " + std::to_string(monotone)
                                + "/16 paths (need 14)");
    require(secs <= 600.0, "runtime " + fmt(secs) + " s exceeds 600 s");
    return "mean residual ratio r(40)/r(5) = " + fmt(late / early)
           + " (bound 0.2), increments decreasing in " + std::to_string(monotone)
           + "/16 paths (need 14), " + fmt(secs) + " s (bound 600)";
}

// 9. Faster noise decay never enlarges the windowed space-time moment: at
//    the t = 20 horizon the L^2_omega windowed norm is non-increasing in
//    gamma across {2, 0.5, 0.1} up to one combined Monte Carlo standard
//    error; the gamma = 0 row is reported without assertion.
std::string criterion_sweep()
{
    auto cfg = preset_config(ExperimentKind::GammaSweep);
    require(cfg.horizon == 20.0, "preset horizon drifted");
    cfg.output_dir = (scratch() / "sweep").string();
    const auto result = run_experiment(cfg);
    require(result.exit_code == 0, "sweep exited " + std::to_string(result.exit_code));

    // gamma,horizon,full,window,window_se,residual at the final horizon
    const auto rows = parse_csv(slurp(fs::path(cfg.output_dir) / "sweep.csv"));
    const auto cell = [&](double gamma) {
        for (const auto& row : rows)
            if (row[0] == gamma && row[1] == 20.0)
                return std::pair<double, double>(row[3], row[4]);
        throw std::runtime_error("missing sweep row for gamma " + fmt(gamma));
    };
    const auto [w20, se20] = cell(2.0);
    const auto [w05, se05] = cell(0.5);
    const auto [w01, se01] = cell(0.1);
    const auto [w00, se00] = cell(0.0);
    require(w20 <= w05 + std::hypot(se20, se05),
            "window moment " + fmt(w20) + " at gamma 2 exceeds " + fmt(w05)
                + " at gamma 0.5 beyond one combined SE");
    require(w05 <= w01 + std::hypot(se05, se01),
            "window moment " + fmt(w05) + " at gamma 0.5 exceeds " + fmt(w01)
                + " at gamma 0.1 beyond one combined SE");
    return "window moment at t = 20 non-increasing in gamma: " + fmt(w20) + " (2) <= "
           + fmt(w05) + " (0.5) <= " + fmt(w01) + " (0.1) within one SE; gamma 0 -> "
           + fmt(w00) + " reported without assertion";
}

// 10. Output is a function of the study alone: the same preset run with 1
//     and 8 workers, and an interrupted run resumed from its serialized path
//     states, emit byte-identical tables.
std::string criterion_determinism()
{
    const auto base = preset_config(ExperimentKind::MassCheck);
    const auto run_into = [&](const std::string& name, std::size_t workers, std::size_t halt,
                              const std::string& resume) {
        auto cfg = base;
        cfg.workers = workers;
        cfg.halt_checkpoint = halt;
        cfg.output_dir = (scratch() / name).string();
        return run_experiment(cfg, resume);
    };
    const auto same_tables = [&](const std::string& a, const std::string& b,
                                 const std::string& what) {
        for (const char* file : {"ensemble.csv", "moments.csv", "summary.txt"})
            require(slurp(scratch() / a / file) == slurp(scratch() / b / file),
                    what + " changed " + file);
    };
    const std::size_t none = std::numeric_limits<std::size_t>::max();

    require(run_into("straight", 1, none, "").exit_code == 0, "single-worker run failed");
    require(run_into("fanned", 8, none, "").exit_code == 0, "eight-worker run failed");
    same_tables("straight", "fanned", "worker fan-out");

    require(run_into("halted", 1, 2, "").exit_code == kRunHalted,
            "interrupted run did not halt");
    require(run_into("resumed", 1, none, (scratch() / "halted").string()).exit_code == 0,
            "resumed run failed");
    same_tables("straight", "resumed", "interrupt plus resume");
    return "1 vs 8 workers and interrupted-plus-resumed runs emit byte-identical tables";
}

struct Criterion {
    int number;
    const char* name;
    std::function<std::string()> run;
};

} // namespace

int main()
{
    std::error_code ec;
    fs::remove_all(scratch(), ec);
    fs::create_directories(scratch());

    const std::vector<Criterion> criteria = {
        {1, "pathwise mass conservation", criterion_mass},
        {2, "dissipation balance ledger", criterion_dissipation},
        {3, "free dispersive decay", criterion_dispersive},
        {4, "exponent pair admissibility", criterion_admissibility},
        {5, "self-convergence on a frozen path", criterion_self_convergence},
        {6, "mild-form reconstruction residual", criterion_duhamel},
        {7, "martingale sup-moment bound", criterion_burkholder},
        {8, "scattering trend", criterion_scattering},
        {9, "noise decay-rate sweep ordering", criterion_sweep},
        {10, "bitwise determinism", criterion_determinism},
    };

    int passed = 0;
    for (const auto& criterion : criteria) {
        std::string detail;
        bool ok = true;
        try {
            detail = criterion.run();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << criterion.number << ". "
                  << criterion.name << ": " << detail << std::endl;
        passed += ok;
    }
    std::cout << passed << "/10 criteria passed" << std::endl;
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}

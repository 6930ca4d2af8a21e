#include "snls/diagnostics.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace snls {

namespace {

using Complex = std::complex<double>;

double relative_drift(double value, double base)
{
    if (base == 0.0)
        return std::abs(value);
    return std::abs(value) / base;
}

void check_ledger_shape(const TrajectoryRecord& rec)
{
    if (rec.times.empty())
        throw std::invalid_argument("empty trajectory record");
    if (rec.mass_ledger.size() != rec.times.size())
        throw std::invalid_argument("mass ledger does not match the checkpoint list");
}

// |u|^sigma u with the dimension-specialized powers of the phase kernel.
ComplexField power_nonlinearity(const ComplexField& u)
{
    const double sigma = 4.0 / static_cast<double>(u.grid.dimension());
    ComplexField out(u.grid);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double a2 = std::norm(u.values[i]);
        double factor;
        if (sigma == 4.0)
            factor = a2 * a2;
        else if (sigma == 2.0)
            factor = a2;
        else
            factor = std::pow(a2, 0.5 * sigma);
        out.values[i] = factor * u.values[i];
    }
    return out;
}

void add_scaled(ComplexField& acc, const ComplexField& term, Complex weight)
{
    for (std::size_t i = 0; i < acc.values.size(); ++i)
        acc.values[i] += weight * term.values[i];
}

// The record's linear flow as an index-based stepper, advancing fields over
// whole checkpoint intervals with the same substep arithmetic the run used.
struct IntervalFlow {
    const TrajectoryRecord& rec;
    DampedLinearStepper stepper;

    explicit IntervalFlow(const TrajectoryRecord& r)
        : rec(r), stepper(FlowParams(r.grid, r.dt), r.associated_damping)
    {
    }

    void advance(ComplexField& w, std::size_t interval) const
    {
        const std::size_t from = rec.step_index(interval);
        const std::size_t to = rec.step_index(interval + 1);
        for (std::size_t k = from; k < to; ++k)
            stepper.advance(w, k);
    }
};

const std::vector<ComplexField>& stored_sums(const TrajectoryRecord& rec,
                                             ConvolutionWeight weight)
{
    if (!rec.stochastic)
        throw std::invalid_argument("record carries no stochastic convolution increments");
    const auto& sums = weight == ConvolutionWeight::full ? rec.convolution_sums
                                                         : rec.convolution_sums_root;
    if (sums.size() + 1 != rec.times.size())
        throw std::invalid_argument("stored convolution increments do not cover the record");
    return sums;
}

std::vector<MaximalRecord> run_maximal_pass(const TrajectoryRecord& rec, double beta,
                                            std::size_t stop, ConvolutionWeight weight)
{
    if (!(beta >= 1.0))
        throw std::invalid_argument("maximal-function exponent must be at least 1");
    const auto& sums = stored_sums(rec, weight);
    IntervalFlow flow(rec);

    std::vector<MaximalRecord> curve;
    curve.reserve(stop + 1);

    std::vector<ComplexField> prefixes;
    prefixes.emplace_back(rec.grid); // the empty prefix at t = 0

    MaximalRecord first;
    first.time = rec.times.front();
    first.beta = beta;
    curve.push_back(first);

    for (std::size_t j = 0; j < stop; ++j) {
        for (auto& p : prefixes)
            flow.advance(p, j);
        ComplexField next = prefixes.back();
        add_scaled(next, sums[j], Complex(1.0, 0.0));
        prefixes.push_back(std::move(next));

        MaximalRecord out;
        out.time = rec.times[j + 1];
        out.beta = beta;
        for (std::size_t a = 0; a + 1 < prefixes.size(); ++a) {
            for (std::size_t b = a + 1; b < prefixes.size(); ++b) {
                ComplexField diff = prefixes[b];
                add_scaled(diff, prefixes[a], Complex(-1.0, 0.0));
                MaximalRecord::PairValue pv;
                pv.a = a;
                pv.b = b;
                pv.value = lp_norm(diff, beta);
                out.value = std::max(out.value, pv.value);
                out.pairs.push_back(pv);
            }
        }
        curve.push_back(std::move(out));
    }
    return curve;
}

// Pullback residual rows without the horizon precondition (the CSV ledger
// wants the column for short records too).
std::vector<ScatteringSample> pullback_rows(const TrajectoryRecord& rec)
{
    check_ledger_shape(rec);
    std::vector<ComplexField> pullbacks;
    pullbacks.reserve(rec.times.size());
    for (std::size_t k = 0; k < rec.times.size(); ++k)
        pullbacks.push_back(free_propagate(rec.fields[k], -rec.times[k]));

    const ComplexField& plus = pullbacks.back();
    std::vector<ScatteringSample> rows(rec.times.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        rows[k].time = rec.times[k];
        ComplexField diff = pullbacks[k];
        add_scaled(diff, plus, Complex(-1.0, 0.0));
        rows[k].residual = lp_norm(diff, 2.0);
        if (k + 1 < rows.size()) {
            ComplexField step = pullbacks[k + 1];
            add_scaled(step, pullbacks[k], Complex(-1.0, 0.0));
            rows[k].cauchy_increment = lp_norm(step, 2.0);
        }
    }
    return rows;
}

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

double mass_ledger_check(const TrajectoryRecord& rec)
{
    check_ledger_shape(rec);
    const double m0 = rec.mass_ledger.front();
    double worst = 0.0;
    for (double m : rec.mass_ledger)
        worst = std::max(worst, relative_drift(m - m0, m0));
    return worst;
}

double dissipation_ledger_check(const TrajectoryRecord& rec)
{
    check_ledger_shape(rec);
    if (rec.dissipation.size() != rec.times.size())
        throw std::invalid_argument("record lacks a dissipation column");
    const double m0 = rec.mass_ledger.front();
    double worst = 0.0;
    for (std::size_t k = 0; k < rec.times.size(); ++k)
        worst = std::max(worst, relative_drift(rec.mass_ledger[k] + rec.dissipation[k] - m0, m0));
    return worst;
}

double strichartz_time_norm(const TrajectoryRecord& rec, const StrichartzPair& pair,
                            double a, double b)
{
    check_ledger_shape(rec);
    if (b < a)
        throw std::invalid_argument("window must be ordered");
    const double tol = 1e-9 * std::max(1.0, std::abs(rec.times.back()));
    if (a < rec.times.front() - tol || b > rec.times.back() + tol)
        throw std::invalid_argument("window outside the recorded range");

    const double p = pair.p.as_double();
    if (pair.q.infinite()) {
        double best = 0.0;
        for (std::size_t k = 0; k < rec.times.size(); ++k)
            if (rec.times[k] >= a - tol && rec.times[k] <= b + tol)
                best = std::max(best, lp_norm(rec.fields[k], p));
        return best;
    }

    const double q = pair.q.as_double();
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < rec.times.size(); ++k) {
        const double lo = std::max(rec.times[k], a);
        const double hi = std::min(rec.times[k + 1], b);
        if (hi <= lo)
            continue;
        sum += std::pow(lp_norm(rec.fields[k], p), q) * (hi - lo);
    }
    return std::pow(sum, 1.0 / q);
}

MaximalRecord maximal_function(const TrajectoryRecord& rec, double beta, double t,
                               ConvolutionWeight weight)
{
    const std::size_t stop = rec.checkpoint_at(t);
    return run_maximal_pass(rec, beta, stop, weight).back();
}

std::vector<MaximalRecord> maximal_curve(const TrajectoryRecord& rec, double beta,
                                         ConvolutionWeight weight)
{
    return run_maximal_pass(rec, beta, rec.checkpoints() - 1, weight);
}

double duhamel_residual(const TrajectoryRecord& rec, double a, double b)
{
    check_ledger_shape(rec);
    const std::size_t a_idx = rec.checkpoint_at(a);
    const std::size_t b_idx = rec.checkpoint_at(b);
    if (b_idx < a_idx)
        throw std::invalid_argument("window must be ordered");
    if (a_idx == b_idx)
        return 0.0;
    const std::vector<ComplexField>* sums = nullptr;
    if (rec.stochastic)
        sums = &stored_sums(rec, ConvolutionWeight::full);

    IntervalFlow flow(rec);
    const Complex minus_i(0.0, -1.0);
    ComplexField c = rec.fields[a_idx];
    for (std::size_t j = a_idx; j < b_idx; ++j) {
        const double width = rec.times[j + 1] - rec.times[j];
        if (rec.has_nonlinearity)
            add_scaled(c, power_nonlinearity(rec.fields[j]), minus_i * (0.5 * width));
        flow.advance(c, j);
        if (rec.has_nonlinearity)
            add_scaled(c, power_nonlinearity(rec.fields[j + 1]), minus_i * (0.5 * width));
        if (sums)
            add_scaled(c, (*sums)[j], minus_i);
    }

    ComplexField diff = rec.fields[b_idx];
    add_scaled(diff, c, Complex(-1.0, 0.0));
    const double base = lp_norm(rec.fields[b_idx], 2.0);
    const double gap = lp_norm(diff, 2.0);
    return base == 0.0 ? gap : gap / base;
}

double burkholder_ratio(const std::vector<BrownianPath>& paths,
                        const std::vector<std::vector<double>>& integrands, double rho,
                        double horizon)
{
    if (!(rho >= 2.0))
        throw std::invalid_argument("moment exponent must be at least 2");
    if (!std::isfinite(rho))
        throw std::invalid_argument("moment exponent must be finite");
    if (paths.empty() || paths.size() != integrands.size())
        throw std::invalid_argument("need one integrand trajectory per path");
    const double dt = paths.front().dt;
    const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
    if (n == 0)
        throw std::invalid_argument("horizon spans no steps");

    double lhs_acc = 0.0;
    double rhs_acc = 0.0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& path = paths[i];
        const auto& sigma = integrands[i];
        if (path.dt != dt)
            throw std::invalid_argument("paths must share one step size");
        if (path.steps() < n || sigma.size() < n)
            throw std::invalid_argument("path shorter than the horizon");
        double running = 0.0;
        double peak = 0.0;
        double square = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            running += sigma[k] * path.increment(k);
            peak = std::max(peak, std::abs(running));
            square += sigma[k] * sigma[k] * dt;
        }
        lhs_acc += std::pow(peak, rho);
        rhs_acc += std::pow(square, 0.5 * rho);
    }
    if (rhs_acc == 0.0)
        return 0.0;
    const double p = static_cast<double>(paths.size());
    return std::pow(lhs_acc / p, 1.0 / rho) / std::pow(rhs_acc / p, 1.0 / rho);
}

std::vector<ScatteringSample> scattering_residual(const TrajectoryRecord& rec)
{
    check_ledger_shape(rec);
    if (rec.times.back() < 4.0)
        throw std::invalid_argument("scattering diagnostics need a horizon of at least 4");
    return pullback_rows(rec);
}

std::vector<double> iteration_exponents(double alpha0, double eps0)
{
    if (!(alpha0 > 2.0))
        throw std::invalid_argument("iteration starts above exponent 2");
    if (!(eps0 > 0.0))
        throw std::invalid_argument("iteration needs a positive decay exponent");
    std::vector<double> chain = {alpha0};
    double a = alpha0;
    // Exponents within a relative ulp-band of the stopping value count as
    // having arrived (the harmonic updates rarely land on 2 exactly).
    const double arrived = 2.0 * (1.0 + 1e-12);
    while (a > arrived) {
        a = 1.0 / (1.0 / a + eps0 / 10.0);
        chain.push_back(std::max(a, 2.0));
        if (a <= arrived)
            break;
    }
    chain.back() = 2.0;
    return chain;
}

std::string trajectory_ledger_csv(const TrajectoryRecord& rec, const StrichartzPair& pair,
                                  bool with_maximal)
{
    check_ledger_shape(rec);
    std::vector<double> m0(rec.times.size(), 0.0);
    if (with_maximal && rec.stochastic) {
        auto curve = maximal_curve(rec, pair.p.as_double());
        for (std::size_t k = 0; k < curve.size(); ++k)
            m0[k] = curve[k].value;
    }
    const auto rows = pullback_rows(rec);

    std::string csv = "time,mass,dissipation,l2,linf,strichartz_window,m0,scattering_residual\n";
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
        csv += fmt(rec.times[k]);
        csv += ',';
        csv += fmt(rec.mass_ledger[k]);
        csv += ',';
        csv += fmt(rec.dissipation[k]);
        csv += ',';
        csv += fmt(lp_norm(rec.fields[k], 2.0));
        csv += ',';
        csv += fmt(lp_norm(rec.fields[k], std::numeric_limits<double>::infinity()));
        csv += ',';
        csv += fmt(strichartz_time_norm(rec, pair, rec.times.front(), rec.times[k]));
        csv += ',';
        csv += fmt(m0[k]);
        csv += ',';
        csv += fmt(rows[k].residual);
        csv += '\n';
    }
    return csv;
}

} // namespace snls

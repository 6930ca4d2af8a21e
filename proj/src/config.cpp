#include "snls/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "snls/rational.hpp"

namespace snls {

namespace {

std::string fmt(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_list(const std::vector<double>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i)
            out += ',';
        out += fmt(xs[i]);
    }
    return out;
}

std::string trim(const std::string& s)
{
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& key, const std::string& what)
{
    throw ConfigError(key + ": " + what);
}

double parse_double(const std::string& key, const std::string& text)
{
    if (text == "inf" || text == "Inf" || text == "INF")
        return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double x = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size())
        fail(key, "expected a number, got '" + text + "'");
    return x;
}

std::size_t parse_size(const std::string& key, const std::string& text)
{
    for (char c : text)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            fail(key, "expected a non-negative integer, got '" + text + "'");
    if (text.empty())
        fail(key, "expected a non-negative integer, got ''");
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size())
        fail(key, "expected a non-negative integer, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true")
        return true;
    if (text == "false")
        return false;
    fail(key, "expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text)
{
    std::vector<double> xs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        xs.push_back(parse_double(key, trim(item)));
    if (xs.empty())
        fail(key, "expected a comma-separated list, got '" + text + "'");
    return xs;
}

Rational parse_exponent(const std::string& key, const std::string& text)
{
    try {
        return parse_rational(text);
    } catch (const std::exception& e) {
        fail(key, e.what());
    }
}

bool power_of_two(std::size_t n)
{
    return n >= 2 && (n & (n - 1)) == 0;
}

struct KeyValues {
    std::map<std::string, std::string> entries;

    // Consumes the key if present; absent keys leave the default in place.
    template <typename F>
    void take(const std::string& key, F&& apply)
    {
        auto it = entries.find(key);
        if (it == entries.end())
            return;
        apply(it->second);
        entries.erase(it);
    }
};

} // namespace

const char* experiment_name(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::MassCheck: return "mass-check";
    case ExperimentKind::DissipationCheck: return "dissipation-check";
    case ExperimentKind::DispersiveCheck: return "dispersive-check";
    case ExperimentKind::DuhamelCheck: return "duhamel-check";
    case ExperimentKind::GammaSweep: return "gamma-sweep";
    case ExperimentKind::ScatteringStudy: return "scattering-study";
    case ExperimentKind::BurkholderCheck: return "burkholder-check";
    }
    throw std::logic_error("unreachable experiment kind");
}

ExperimentKind parse_experiment(const std::string& name)
{
    for (auto kind : {ExperimentKind::MassCheck, ExperimentKind::DissipationCheck,
                      ExperimentKind::DispersiveCheck, ExperimentKind::DuhamelCheck,
                      ExperimentKind::GammaSweep, ExperimentKind::ScatteringStudy,
                      ExperimentKind::BurkholderCheck}) {
        if (name == experiment_name(kind))
            return kind;
    }
    fail("experiment", "unknown preset '" + name + "'");
}

std::vector<double> uniform_checkpoints(double horizon, std::size_t intervals)
{
    if (!(horizon > 0.0) || intervals == 0)
        throw std::invalid_argument("uniform checkpoints need horizon > 0 and intervals >= 1");
    std::vector<double> cps;
    cps.reserve(intervals + 1);
    for (std::size_t j = 0; j <= intervals; ++j)
        cps.push_back(horizon * static_cast<double>(j) / static_cast<double>(intervals));
    return cps;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const
{
    return experiment == o.experiment && dimension == o.dimension && extent == o.extent
        && points == o.points && dt == o.dt && horizon == o.horizon
        && checkpoints == o.checkpoints && dealias == o.dealias && data_mass == o.data_mass
        && data_width == o.data_width && noise_amplitude == o.noise_amplitude
        && noise_gamma == o.noise_gamma && noise_width == o.noise_width
        && damping_amplitude == o.damping_amplitude && damping_width == o.damping_width
        && damping_exponent == o.damping_exponent && paths == o.paths
        && master_seed == o.master_seed && rho_list == o.rho_list && workers == o.workers
        && pair.q == o.pair.q && pair.p == o.pair.p && sweep_gammas == o.sweep_gammas
        && sweep_horizons == o.sweep_horizons && halt_checkpoint == o.halt_checkpoint
        && output_dir == o.output_dir;
}

ExperimentConfig preset_config(ExperimentKind kind)
{
    // Every preset keeps the dimension-default Strichartz pair; explicit
    // pair.q / pair.p keys can still override it at parse time.
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind) {
    case ExperimentKind::MassCheck:
        break;
    case ExperimentKind::DissipationCheck:
        c.horizon = 5.0;
        break;
    case ExperimentKind::DispersiveCheck:
        c.extent = 256.0;
        c.points = 1024;
        c.horizon = 20.0;
        c.noise_amplitude = 0.0;
        break;
    case ExperimentKind::DuhamelCheck:
        c.extent = 32.0;
        c.points = 64;
        c.horizon = 2.0;
        c.noise_amplitude = 0.002;
        c.noise_gamma = 0.5;
        c.checkpoints = uniform_checkpoints(2.0, 100);
        break;
    case ExperimentKind::GammaSweep:
        c.dt = 2e-3;
        c.horizon = 20.0;
        c.noise_gamma = 0.5;
        c.master_seed = 314;
        c.checkpoints = uniform_checkpoints(20.0, 40);
        break;
    case ExperimentKind::ScatteringStudy:
        c.extent = 512.0;
        c.points = 2048;
        c.dt = 0.01;
        c.horizon = 44.0;
        c.checkpoints = {0.0, 1.0, 5.0, 23.0, 40.0, 44.0};
        c.data_mass = 0.5;
        c.noise_gamma = 0.3;
        c.noise_width = 1.0;
        c.paths = 16;
        c.master_seed = 2027;
        break;
    case ExperimentKind::BurkholderCheck:
        c.horizon = 1.0;
        c.paths = 4096;
        break;
    }
    if (c.checkpoints.empty())
        c.checkpoints = uniform_checkpoints(c.horizon, 10);
    return c;
}

ExperimentConfig parse_config(const std::string& text)
{
    KeyValues kv;
    std::stringstream lines(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno)
                              + ": expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (!kv.entries.emplace(key, value).second)
            throw ConfigError("duplicate key '" + key + "'");
    }

    ExperimentKind kind = ExperimentKind::MassCheck;
    kv.take("experiment", [&](const std::string& v) { kind = parse_experiment(v); });
    ExperimentConfig c = preset_config(kind);

    kv.take("grid.d", [&](const std::string& v) {
        c.dimension = static_cast<int>(parse_size("grid.d", v));
    });
    kv.take("grid.L", [&](const std::string& v) { c.extent = parse_double("grid.L", v); });
    kv.take("grid.N", [&](const std::string& v) { c.points = parse_size("grid.N", v); });

    kv.take("flow.dt", [&](const std::string& v) { c.dt = parse_double("flow.dt", v); });
    bool horizon_overridden = false;
    kv.take("flow.horizon", [&](const std::string& v) {
        c.horizon = parse_double("flow.horizon", v);
        horizon_overridden = true;
    });
    kv.take("flow.dealias",
            [&](const std::string& v) { c.dealias = parse_bool("flow.dealias", v); });

    kv.take("data.mass", [&](const std::string& v) { c.data_mass = parse_double("data.mass", v); });
    kv.take("data.width",
            [&](const std::string& v) { c.data_width = parse_double("data.width", v); });

    kv.take("noise.v0",
            [&](const std::string& v) { c.noise_amplitude = parse_double("noise.v0", v); });
    kv.take("noise.gamma",
            [&](const std::string& v) { c.noise_gamma = parse_double("noise.gamma", v); });
    kv.take("noise.width",
            [&](const std::string& v) { c.noise_width = parse_double("noise.width", v); });

    kv.take("damping.amplitude", [&](const std::string& v) {
        c.damping_amplitude = parse_double("damping.amplitude", v);
    });
    kv.take("damping.width",
            [&](const std::string& v) { c.damping_width = parse_double("damping.width", v); });
    kv.take("damping.exponent", [&](const std::string& v) {
        c.damping_exponent = parse_double("damping.exponent", v);
    });

    kv.take("ensemble.paths",
            [&](const std::string& v) { c.paths = parse_size("ensemble.paths", v); });
    kv.take("ensemble.seed", [&](const std::string& v) {
        c.master_seed = static_cast<std::uint64_t>(parse_size("ensemble.seed", v));
    });
    kv.take("ensemble.rho",
            [&](const std::string& v) { c.rho_list = parse_list("ensemble.rho", v); });
    kv.take("ensemble.workers",
            [&](const std::string& v) { c.workers = parse_size("ensemble.workers", v); });

    // The pair default depends on the (already applied) dimension.
    c.pair = default_pair(c.dimension >= 1 && c.dimension <= 3 ? c.dimension : 1);
    kv.take("pair.q", [&](const std::string& v) { c.pair.q = parse_exponent("pair.q", v); });
    kv.take("pair.p", [&](const std::string& v) { c.pair.p = parse_exponent("pair.p", v); });

    kv.take("sweep.gammas",
            [&](const std::string& v) { c.sweep_gammas = parse_list("sweep.gammas", v); });
    kv.take("sweep.horizons",
            [&](const std::string& v) { c.sweep_horizons = parse_list("sweep.horizons", v); });

    kv.take("run.halt_checkpoint", [&](const std::string& v) {
        c.halt_checkpoint = v == "none" ? std::numeric_limits<std::size_t>::max()
                                        : parse_size("run.halt_checkpoint", v);
    });
    kv.take("output.dir", [&](const std::string& v) {
        if (v.empty())
            fail("output.dir", "must not be empty");
        c.output_dir = v;
    });

    // Checkpoints may reference the horizon ("uniform:K"), so resolve last.
    // A changed horizon without an explicit schedule keeps the preset's
    // checkpoint count, uniformly rescaled.
    if (horizon_overridden) {
        if (!(c.horizon > 0.0) || !std::isfinite(c.horizon))
            fail("flow.horizon", "must be positive and finite");
        c.checkpoints = uniform_checkpoints(c.horizon, c.checkpoints.size() - 1);
    }
    kv.take("flow.checkpoints", [&](const std::string& v) {
        if (v.rfind("uniform:", 0) == 0) {
            const std::size_t k = parse_size("flow.checkpoints", v.substr(8));
            if (k == 0)
                fail("flow.checkpoints", "uniform:K needs K >= 1");
            if (!(c.horizon > 0.0) || !std::isfinite(c.horizon))
                fail("flow.horizon", "must be positive before uniform checkpoints");
            c.checkpoints = uniform_checkpoints(c.horizon, k);
        } else {
            c.checkpoints = parse_list("flow.checkpoints", v);
        }
    });

    if (!kv.entries.empty())
        throw ConfigError("unknown key '" + kv.entries.begin()->first + "'");

    validate_config(c);
    return c;
}

void validate_config(const ExperimentConfig& c)
{
    if (c.dimension < 1 || c.dimension > 3)
        fail("grid.d", "dimension must be 1, 2, or 3");
    if (!(c.extent > 0.0) || !std::isfinite(c.extent))
        fail("grid.L", "box extent must be positive and finite");
    if (!power_of_two(c.points))
        fail("grid.N", "points per axis must be a power of two >= 2 (got "
                           + std::to_string(c.points) + ")");
    if (!(c.dt > 0.0) || !std::isfinite(c.dt))
        fail("flow.dt", "step size must be positive and finite");
    if (!(c.horizon >= c.dt) || !std::isfinite(c.horizon))
        fail("flow.horizon", "horizon must be finite and at least one step");
    if (c.checkpoints.size() < 2)
        fail("flow.checkpoints", "need at least the endpoints {0, horizon}");
    if (c.checkpoints.front() != 0.0)
        fail("flow.checkpoints", "first checkpoint must be 0");
    if (std::abs(c.checkpoints.back() - c.horizon) > 1e-9 * std::max(1.0, c.horizon))
        fail("flow.checkpoints", "last checkpoint must equal the horizon");
    for (std::size_t j = 1; j < c.checkpoints.size(); ++j)
        if (!(c.checkpoints[j] > c.checkpoints[j - 1]))
            fail("flow.checkpoints", "times must increase strictly");
    if (!(c.data_mass > 0.0) || !std::isfinite(c.data_mass))
        fail("data.mass", "initial mass must be positive");
    if (!(c.data_width > 0.0) || !std::isfinite(c.data_width))
        fail("data.width", "width must be positive and finite");
    if (c.noise_amplitude < 0.0 || !std::isfinite(c.noise_amplitude))
        fail("noise.v0", "amplitude must be >= 0");
    if (c.noise_gamma < 0.0 || !std::isfinite(c.noise_gamma))
        fail("noise.gamma", "decay exponent must be >= 0");
    if (!(c.noise_width > 0.0) || !std::isfinite(c.noise_width))
        fail("noise.width", "width must be positive and finite");
    if (c.damping_amplitude < 0.0 || !std::isfinite(c.damping_amplitude))
        fail("damping.amplitude", "must be >= 0");
    if (!(c.damping_width > 0.0) || !std::isfinite(c.damping_width))
        fail("damping.width", "width must be positive and finite");
    if (c.damping_exponent < 0.0 || !std::isfinite(c.damping_exponent))
        fail("damping.exponent", "must be >= 0");
    if (c.paths == 0)
        fail("ensemble.paths", "need at least one path");
    if (c.workers == 0)
        fail("ensemble.workers", "need at least one worker");
    if (c.rho_list.empty())
        fail("ensemble.rho", "need at least one moment order");
    for (double rho : c.rho_list)
        if (!(rho >= 1.0) || std::isnan(rho))
            fail("ensemble.rho", "moment orders must satisfy rho >= 1");
    if (!is_admissible(c.pair, c.dimension))
        fail("pair.q", "(" + c.pair.q.str() + ", " + c.pair.p.str()
                           + ") is not Schrodinger-admissible in dimension "
                           + std::to_string(c.dimension));
    if (c.sweep_gammas.empty())
        fail("sweep.gammas", "need at least one value");
    for (double g : c.sweep_gammas)
        if (g < 0.0 || !std::isfinite(g))
            fail("sweep.gammas", "decay exponents must be >= 0");
    if (c.sweep_horizons.empty())
        fail("sweep.horizons", "need at least one value");
    for (double t : c.sweep_horizons)
        if (!(t > 0.0) || !std::isfinite(t))
            fail("sweep.horizons", "horizons must be positive");
    if (c.output_dir.empty())
        fail("output.dir", "must not be empty");
}

std::string print_config(const ExperimentConfig& c)
{
    std::string out;
    auto put = [&](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    put("experiment", experiment_name(c.experiment));
    put("grid.d", std::to_string(c.dimension));
    put("grid.L", fmt(c.extent));
    put("grid.N", std::to_string(c.points));
    put("flow.dt", fmt(c.dt));
    put("flow.horizon", fmt(c.horizon));
    put("flow.checkpoints", fmt_list(c.checkpoints));
    put("flow.dealias", c.dealias ? "true" : "false");
    put("data.mass", fmt(c.data_mass));
    put("data.width", fmt(c.data_width));
    put("noise.v0", fmt(c.noise_amplitude));
    put("noise.gamma", fmt(c.noise_gamma));
    put("noise.width", fmt(c.noise_width));
    put("damping.amplitude", fmt(c.damping_amplitude));
    put("damping.width", fmt(c.damping_width));
    put("damping.exponent", fmt(c.damping_exponent));
    put("ensemble.paths", std::to_string(c.paths));
    put("ensemble.seed", std::to_string(c.master_seed));
    put("ensemble.rho", fmt_list(c.rho_list));
    put("ensemble.workers", std::to_string(c.workers));
    put("pair.q", c.pair.q.str());
    put("pair.p", c.pair.p.str());
    put("sweep.gammas", fmt_list(c.sweep_gammas));
    put("sweep.horizons", fmt_list(c.sweep_horizons));
    put("run.halt_checkpoint",
        c.halt_checkpoint == std::numeric_limits<std::size_t>::max()
            ? std::string("none")
            : std::to_string(c.halt_checkpoint));
    put("output.dir", c.output_dir);
    return out;
}

} // namespace snls

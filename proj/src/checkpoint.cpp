#include "snls/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace snls {

namespace {

constexpr char kMagic[8] = {'S', 'N', 'L', 'S', 'P', 'A', 'T', 'H'};
constexpr std::uint32_t kVersion = 1;

constexpr std::uint32_t kFlagStochastic = 1u << 0;
constexpr std::uint32_t kFlagNonlinear = 1u << 1;
constexpr std::uint32_t kFlagDealias = 1u << 2;
constexpr std::uint32_t kFlagRootSums = 1u << 3;

[[noreturn]] void refuse(const std::string& name, const std::string& what)
{
    throw std::runtime_error(name + ": " + what);
}

void put_bytes(std::ostream& out, std::uint64_t v, int n)
{
    char buf[8];
    for (int i = 0; i < n; ++i)
        buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, n);
}

void put_u32(std::ostream& out, std::uint32_t v) { put_bytes(out, v, 4); }
void put_u64(std::ostream& out, std::uint64_t v) { put_bytes(out, v, 8); }
void put_f64(std::ostream& out, double x) { put_bytes(out, std::bit_cast<std::uint64_t>(x), 8); }

std::uint64_t get_bytes(std::istream& in, int n, const std::string& name)
{
    char buf[8];
    in.read(buf, n);
    if (in.gcount() != n)
        refuse(name, "truncated record");
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
}

std::uint32_t get_u32(std::istream& in, const std::string& name)
{
    return static_cast<std::uint32_t>(get_bytes(in, 4, name));
}

std::uint64_t get_u64(std::istream& in, const std::string& name)
{
    return get_bytes(in, 8, name);
}

double get_f64(std::istream& in, const std::string& name)
{
    return std::bit_cast<double>(get_bytes(in, 8, name));
}

void expect_end(std::istream& in, const std::string& name)
{
    if (in.peek() != std::char_traits<char>::eof())
        refuse(name, "trailing bytes after the record");
}

std::vector<double> read_scalars(std::istream& in, std::size_t count, const std::string& name)
{
    std::vector<double> xs(count);
    for (auto& x : xs)
        x = get_f64(in, name);
    return xs;
}

} // namespace

void write_field(const ComplexField& u, std::ostream& out)
{
    put_u32(out, static_cast<std::uint32_t>(u.grid.dimension()));
    put_u32(out, static_cast<std::uint32_t>(u.grid.points_per_axis()));
    put_f64(out, u.grid.extent());
    for (const Complex& z : u.values) {
        put_f64(out, z.real());
        put_f64(out, z.imag());
    }
}

ComplexField read_field(std::istream& in, const std::string& name)
{
    const auto d = get_u32(in, name);
    const auto n = get_u32(in, name);
    const double extent = get_f64(in, name);
    if (d < 1 || d > 3)
        refuse(name, "field header has dimension " + std::to_string(d));
    if (n < 2 || (n & (n - 1)) != 0)
        refuse(name, "field header has non-power-of-two axis " + std::to_string(n));
    if (!(extent > 0.0) || !std::isfinite(extent))
        refuse(name, "field header has invalid box extent");
    ComplexField u(make_grid(static_cast<int>(d), extent, n));
    for (Complex& z : u.values) {
        const double re = get_f64(in, name);
        const double im = get_f64(in, name);
        z = Complex(re, im);
    }
    return u;
}

void save_field(const ComplexField& u, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        refuse(path, "cannot open for writing");
    write_field(u, out);
    out.flush();
    if (!out)
        refuse(path, "write failed");
}

ComplexField load_field(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        refuse(path, "cannot open");
    auto u = read_field(in, path);
    expect_end(in, path);
    return u;
}

std::string path_state_name(const std::string& dir, std::size_t index)
{
    return dir + "/path_" + std::to_string(index) + ".state";
}

void save_path_state(const TrajectoryRecord& rec, std::size_t index, const std::string& path)
{
    if (rec.checkpoints() == 0)
        throw std::invalid_argument("cannot save an empty record");
    const std::size_t J = rec.checkpoints();
    const bool roots = !rec.convolution_sums_root.empty();
    if (rec.stochastic && rec.convolution_sums.size() + 1 != J)
        throw std::invalid_argument("record noise sums do not match its checkpoints");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        refuse(path, "cannot open for writing");
    out.write(kMagic, sizeof kMagic);
    put_u32(out, kVersion);
    put_u64(out, static_cast<std::uint64_t>(index));
    put_u64(out, rec.seed);
    put_f64(out, rec.dt);
    std::uint32_t flags = 0;
    flags |= rec.stochastic ? kFlagStochastic : 0;
    flags |= rec.has_nonlinearity ? kFlagNonlinear : 0;
    flags |= rec.dealias ? kFlagDealias : 0;
    flags |= roots ? kFlagRootSums : 0;
    put_u32(out, flags);
    put_f64(out, rec.noise_decay);
    put_f64(out, rec.noise_amplitude);
    put_u64(out, static_cast<std::uint64_t>(rec.step_index(J - 1)));
    put_u32(out, static_cast<std::uint32_t>(J));
    for (double t : rec.times)
        put_f64(out, t);
    for (double m : rec.mass_ledger)
        put_f64(out, m);
    for (double s : rec.dissipation)
        put_f64(out, s);
    for (double w : rec.weighted_mass)
        put_f64(out, w);
    for (const auto& u : rec.fields)
        write_field(u, out);
    for (const auto& s : rec.convolution_sums)
        write_field(s, out);
    for (const auto& s : rec.convolution_sums_root)
        write_field(s, out);
    out.flush();
    if (!out)
        refuse(path, "write failed");
}

TrajectoryRecord load_path_state(const std::string& path, const EnsembleSpec& spec,
                                 std::size_t index)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        refuse(path, "cannot open");

    char magic[8];
    in.read(magic, sizeof magic);
    if (in.gcount() != sizeof magic || std::memcmp(magic, kMagic, sizeof magic) != 0)
        refuse(path, "not a path state file (bad header)");
    if (get_u32(in, path) != kVersion)
        refuse(path, "unsupported state version");
    if (get_u64(in, path) != index)
        refuse(path, "state file belongs to a different path index");
    const std::uint64_t seed = get_u64(in, path);
    if (seed != stream_key(spec.master_seed, index))
        refuse(path, "state file belongs to a different run (seed mismatch)");
    const double dt = get_f64(in, path);
    if (dt != spec.dt)
        refuse(path, "state step size does not match the configured run");
    const std::uint32_t flags = get_u32(in, path);
    const double decay = get_f64(in, path);
    const double amplitude = get_f64(in, path);
    if (decay != spec.noise.gamma || amplitude != spec.noise.amplitude)
        refuse(path, "state noise parameters do not match the configured run");
    if (bool(flags & kFlagDealias) != spec.dealias)
        refuse(path, "state dealias flag does not match the configured run");
    const std::uint64_t next_step = get_u64(in, path);
    const std::size_t J = get_u32(in, path);
    if (J == 0)
        refuse(path, "state file records no checkpoints");
    if (J > spec.checkpoints.size())
        refuse(path, "state file has more checkpoints than the configured run");

    TrajectoryRecord rec(spec.grid);
    rec.dt = dt;
    rec.dealias = spec.dealias;
    rec.has_nonlinearity = flags & kFlagNonlinear;
    rec.stochastic = flags & kFlagStochastic;
    rec.associated_damping = spec.noise.compensator();
    rec.seed = seed;
    rec.noise_decay = decay;
    rec.noise_amplitude = amplitude;

    rec.times = read_scalars(in, J, path);
    rec.mass_ledger = read_scalars(in, J, path);
    rec.dissipation = read_scalars(in, J, path);
    rec.weighted_mass = read_scalars(in, J, path);
    for (std::size_t j = 0; j < J; ++j) {
        if (std::abs(rec.times[j] - spec.checkpoints[j]) > 1e-9)
            refuse(path, "recorded checkpoint times do not prefix the configured run");
    }
    const double last_step = rec.times.back() / dt;
    if (std::abs(static_cast<double>(next_step) - last_step) > 1e-6)
        refuse(path, "stored step counter disagrees with the last checkpoint time");

    auto read_fields = [&](std::size_t count) {
        std::vector<ComplexField> fs;
        fs.reserve(count);
        for (std::size_t j = 0; j < count; ++j) {
            auto u = read_field(in, path);
            if (!(u.grid == spec.grid))
                refuse(path, "stored field grid does not match the configured run");
            fs.push_back(std::move(u));
        }
        return fs;
    };
    rec.fields = read_fields(J);
    if (rec.stochastic)
        rec.convolution_sums = read_fields(J - 1);
    if (flags & kFlagRootSums)
        rec.convolution_sums_root = read_fields(J - 1);
    expect_end(in, path);
    return rec;
}

} // namespace snls

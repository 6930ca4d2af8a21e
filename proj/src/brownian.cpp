#include "snls/brownian.hpp"

#include <cmath>
#include <stdexcept>

namespace snls {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

} // namespace

std::uint64_t mix64(std::uint64_t z)
{
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

double uniform_at(std::uint64_t key, std::uint64_t counter)
{
    const std::uint64_t v = mix64(key + (counter + 1) * kGolden);
    // 53 random bits mapped to (0, 1]; never zero, so logs are safe.
    return static_cast<double>((v >> 11) + 1) * 0x1.0p-53;
}

double gaussian_at(std::uint64_t key, std::uint64_t counter)
{
    const double u1 = uniform_at(key, 2 * counter);
    const double u2 = uniform_at(key, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t path_index)
{
    return mix64(master_seed ^ mix64(path_index + 0x632BE59BD9B4E019ull));
}

double BrownianPath::value(std::size_t k) const
{
    if (k > increments.size())
        throw std::out_of_range("Brownian path index beyond sampled horizon");
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        s += increments[i];
    return s;
}

BrownianPath BrownianPath::coarsen(std::size_t factor) const
{
    if (factor == 0)
        throw std::invalid_argument("coarsening factor must be positive");
    if (increments.size() % factor != 0)
        throw std::invalid_argument("coarsening factor must divide the step count");
    BrownianPath out;
    out.key = key;
    out.dt = dt * static_cast<double>(factor);
    out.increments.resize(increments.size() / factor);
    for (std::size_t k = 0; k < out.increments.size(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < factor; ++i)
            s += increments[k * factor + i];
        out.increments[k] = s;
    }
    return out;
}

BrownianPath sample_path(std::uint64_t seed, double dt, double horizon)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("Brownian step must be positive");
    if (!(horizon >= dt))
        throw std::invalid_argument("Brownian horizon must cover at least one step");
    const auto n = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    BrownianPath path;
    path.key = seed;
    path.dt = dt;
    path.increments.resize(n);
    const double scale = std::sqrt(dt);
    for (std::size_t k = 0; k < n; ++k)
        path.increments[k] = scale * gaussian_at(seed, k);
    return path;
}

BrownianPath zero_path(double dt, double horizon)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("Brownian step must be positive");
    if (!(horizon >= dt))
        throw std::invalid_argument("Brownian horizon must cover at least one step");
    const auto n = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    BrownianPath path;
    path.dt = dt;
    path.increments.assign(n, 0.0);
    return path;
}

} // namespace snls

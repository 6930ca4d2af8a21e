#pragma once

#include <cstdint>
#include <vector>

namespace snls {

// Counter-based uniform and Gaussian draws: value(key, counter) is a pure
// function, so any increment of any path can be regenerated in O(1) without
// walking a sequential engine. This is what makes ensemble scheduling and
// checkpoint resume bitwise reproducible.
std::uint64_t mix64(std::uint64_t z);
double uniform_at(std::uint64_t key, std::uint64_t counter); // in (0, 1]
double gaussian_at(std::uint64_t key, std::uint64_t counter); // standard normal

// Derived stream key for one ensemble member.
std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t path_index);

// Sampled Brownian increments on a uniform step grid.
struct BrownianPath {
    std::uint64_t key = 0;
    double dt = 0.0;
    std::vector<double> increments;

    std::size_t steps() const { return increments.size(); }
    double increment(std::size_t k) const { return increments.at(k); }

    // B at t_k (prefix sum; value(0) = 0).
    double value(std::size_t k) const;

    // Same trajectory at step dt * factor: consecutive increments summed.
    // Requires factor >= 1 dividing the step count.
    BrownianPath coarsen(std::size_t factor) const;
};

// ceil(horizon/dt) Gaussian increments of variance dt. Requires dt > 0 and
// horizon >= dt.
BrownianPath sample_path(std::uint64_t seed, double dt, double horizon);

// All-zero path with the same shape (frozen deterministic driver).
BrownianPath zero_path(double dt, double horizon);

} // namespace snls

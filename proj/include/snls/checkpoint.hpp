#pragma once

#include <iosfwd>
#include <string>

#include "snls/ensemble.hpp"

namespace snls {

// Flat binary field record: header (d, N, L as little-endian u32, u32, f64)
// followed by N^d interleaved (re, im) f64 pairs, row-major by axis order.
void write_field(const ComplexField& u, std::ostream& out);

// `name` labels the source in error messages (truncated or malformed input
// is refused, never padded).
ComplexField read_field(std::istream& in, const std::string& name);

void save_field(const ComplexField& u, const std::string& path);
ComplexField load_field(const std::string& path);

// Per-path run state: a descriptive header, the partial trajectory ledger,
// every checkpointed field, and the interval noise sums, so a halted path
// can continue from its last checkpoint with the step counter (and hence
// the counter-based noise stream position) intact.
void save_path_state(const TrajectoryRecord& record, std::size_t index,
                     const std::string& path);

// Rebuilds the partial record for path `index` of `spec`, cross-checking
// grid, step size, seed, flags, and checkpoint times. Corrupted, truncated,
// or mismatched files are refused with the offending file named.
TrajectoryRecord load_path_state(const std::string& path, const EnsembleSpec& spec,
                                 std::size_t index);

// Canonical state-file name for one path inside a state directory.
std::string path_state_name(const std::string& dir, std::size_t index);

} // namespace snls

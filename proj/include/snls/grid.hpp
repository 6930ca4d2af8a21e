#pragma once

#include <cstddef>
#include <vector>

namespace snls {

// Uniform periodic grid on the torus [-L/2, L/2)^d.
//
// Index j along an axis sits at x_j = -L/2 + j*h with h = L/N, and carries
// the discrete frequency xi_k = 2*pi*k/L with k = j for j < N/2 and k = j - N
// otherwise (standard FFT layout). Multi-indices are flattened row-major in
// axis order.
class SpatialGrid {
public:
    SpatialGrid(int dimension, double extent, std::size_t points_per_axis);

    int dimension() const { return dim_; }
    double extent() const { return extent_; }
    std::size_t points_per_axis() const { return n_; }
    std::size_t total_points() const { return total_; }

    double spacing() const { return extent_ / static_cast<double>(n_); }
    double cell_volume() const { return cell_volume_; }

    // Position of axis index j in [-L/2, L/2).
    double coordinate(std::size_t j) const
    {
        return -0.5 * extent_ + spacing() * static_cast<double>(j);
    }

    // Frequency of axis index j, in FFT order.
    double frequency(std::size_t j) const { return freq_[j]; }

    // Squared frequency magnitude |xi|^2 of a flattened index.
    double frequency_sq(std::size_t flat) const;

    // Decompose a flattened index into per-axis indices (size = dimension()).
    void unflatten(std::size_t flat, std::size_t* axis_index) const;

    bool operator==(const SpatialGrid& other) const
    {
        return dim_ == other.dim_ && extent_ == other.extent_ && n_ == other.n_;
    }

private:
    int dim_;
    double extent_;
    std::size_t n_;
    std::size_t total_;
    double cell_volume_;
    std::vector<double> freq_;
};

// Validating factory: d in {1,2,3}, L > 0, N a power of two >= 16.
SpatialGrid make_grid(int dimension, double extent, std::size_t points_per_axis);

} // namespace snls

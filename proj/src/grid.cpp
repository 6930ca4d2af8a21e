#include "snls/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace snls {

namespace {

bool power_of_two(std::size_t n)
{
    return n != 0 && (n & (n - 1)) == 0;
}

} // namespace

SpatialGrid::SpatialGrid(int dimension, double extent, std::size_t points_per_axis)
    : dim_(dimension), extent_(extent), n_(points_per_axis)
{
    if (dim_ < 1 || dim_ > 3)
        throw std::invalid_argument("grid dimension must be 1, 2 or 3, got "
                                    + std::to_string(dim_));
    if (!(extent_ > 0.0) || !std::isfinite(extent_))
        throw std::invalid_argument("grid extent must be positive and finite");
    if (!power_of_two(n_) || n_ < 16)
        throw std::invalid_argument("points per axis must be a power of two >= 16, got "
                                    + std::to_string(n_));

    total_ = 1;
    for (int a = 0; a < dim_; ++a)
        total_ *= n_;
    cell_volume_ = std::pow(spacing(), dim_);

    freq_.resize(n_);
    const double base = 2.0 * M_PI / extent_;
    const std::size_t half = n_ / 2;
    for (std::size_t j = 0; j < n_; ++j) {
        const auto k = (j < half) ? static_cast<long long>(j)
                                  : static_cast<long long>(j) - static_cast<long long>(n_);
        freq_[j] = base * static_cast<double>(k);
    }
}

double SpatialGrid::frequency_sq(std::size_t flat) const
{
    double s = 0.0;
    for (int a = dim_ - 1; a >= 0; --a) {
        const double f = freq_[flat % n_];
        s += f * f;
        flat /= n_;
    }
    return s;
}

void SpatialGrid::unflatten(std::size_t flat, std::size_t* axis_index) const
{
    for (int a = dim_ - 1; a >= 0; --a) {
        axis_index[a] = flat % n_;
        flat /= n_;
    }
}

SpatialGrid make_grid(int dimension, double extent, std::size_t points_per_axis)
{
    return SpatialGrid(dimension, extent, points_per_axis);
}

} // namespace snls

#include "snls/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace snls {

namespace {

// Plan cache keyed by (dimension, points-per-axis, sign). Plans are created
// once with FFTW_ESTIMATE | FFTW_UNALIGNED (deterministic algorithm choice,
// no buffer alignment requirements) and executed through the new-array
// interface, which is thread-safe.
class PlanCache {
public:
    static fftw_plan get(const SpatialGrid& grid, int sign)
    {
        static PlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mutex_);
        const Key key{grid.dimension(), grid.points_per_axis(), sign};
        auto it = cache.plans_.find(key);
        if (it != cache.plans_.end())
            return it->second;

        std::vector<fftw_complex> scratch(grid.total_points());
        int n[3] = {0, 0, 0};
        for (int a = 0; a < grid.dimension(); ++a)
            n[a] = static_cast<int>(grid.points_per_axis());
        fftw_plan plan = fftw_plan_dft(grid.dimension(), n, scratch.data(), scratch.data(),
                                       sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan)
            throw std::runtime_error("fftw plan creation failed");
        cache.plans_.emplace(key, plan);
        return plan;
    }

private:
    using Key = std::tuple<int, std::size_t, int>;
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

void execute(const SpatialGrid& grid, Complex* data, int sign)
{
    fftw_plan plan = PlanCache::get(grid, sign);
    auto* raw = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, raw, raw);
}

} // namespace

void dft_forward(const SpatialGrid& grid, Complex* data)
{
    execute(grid, data, FFTW_FORWARD);
}

void dft_inverse(const SpatialGrid& grid, Complex* data)
{
    execute(grid, data, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(grid.total_points());
    const std::size_t n = grid.total_points();
    for (std::size_t i = 0; i < n; ++i)
        data[i] *= scale;
}

SpectralMultiplier::SpectralMultiplier(const SpatialGrid& g, std::vector<Complex> s)
    : grid(g), symbol(std::move(s))
{
    if (symbol.size() != grid.total_points())
        throw std::invalid_argument("multiplier symbol length does not match grid");
}

SpectralMultiplier SpectralMultiplier::free_evolution(const SpatialGrid& grid, double t)
{
    std::vector<Complex> s(grid.total_points());
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = std::polar(1.0, -t * grid.frequency_sq(i));
    return SpectralMultiplier(grid, std::move(s));
}

SpectralMultiplier SpectralMultiplier::dealias_projector(const SpatialGrid& grid)
{
    // Keep |k| <= N/3 along every axis; zero the rest.
    const double cutoff = 2.0 * M_PI / grid.extent()
                          * (static_cast<double>(grid.points_per_axis()) / 3.0);
    const double c2 = cutoff * cutoff * (1.0 + 1e-12);
    std::vector<Complex> s(grid.total_points());
    std::size_t idx[3] = {0, 0, 0};
    for (std::size_t i = 0; i < s.size(); ++i) {
        grid.unflatten(i, idx);
        bool keep = true;
        for (int a = 0; a < grid.dimension(); ++a) {
            const double f = grid.frequency(idx[a]);
            if (f * f > c2) {
                keep = false;
                break;
            }
        }
        s[i] = keep ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
    }
    return SpectralMultiplier(grid, std::move(s));
}

void SpectralMultiplier::apply(ComplexField& u) const
{
    if (!(u.grid == grid))
        throw std::invalid_argument("multiplier grid does not match field grid");
    dft_forward(grid, u.values.data());
    for (std::size_t i = 0; i < u.values.size(); ++i)
        u.values[i] *= symbol[i];
    dft_inverse(grid, u.values.data());
}

ComplexField free_propagate(const ComplexField& u0, double t)
{
    ComplexField u = u0;
    free_propagate_inplace(u, t);
    return u;
}

void free_propagate_inplace(ComplexField& u, double t)
{
    if (t == 0.0)
        return;
    if (!std::isfinite(t))
        throw std::invalid_argument("propagation time must be finite");
    dft_forward(u.grid, u.values.data());
    for (std::size_t i = 0; i < u.values.size(); ++i)
        u.values[i] *= std::polar(1.0, -t * u.grid.frequency_sq(i));
    dft_inverse(u.grid, u.values.data());
}

double spectral_mass(const ComplexField& u)
{
    std::vector<Complex> hat = u.values;
    dft_forward(u.grid, hat.data());
    double s = 0.0;
    for (const auto& z : hat)
        s += std::norm(z);
    return s * u.grid.cell_volume() / static_cast<double>(u.grid.total_points());
}

std::vector<DecaySample> dispersive_decay_profile(const ComplexField& u0,
                                                  const std::vector<double>& times)
{
    if (times.empty())
        throw std::invalid_argument("dispersive profile needs at least one time");
    double prev = 0.0;
    for (double t : times) {
        if (!(t > 0.0) || !std::isfinite(t))
            throw std::invalid_argument("profile times must be positive and finite");
        if (t <= prev)
            throw std::invalid_argument("profile times must be strictly increasing");
        prev = t;
    }

    std::vector<DecaySample> out;
    out.reserve(times.size());
    const double half_d = 0.5 * static_cast<double>(u0.grid.dimension());
    for (double t : times) {
        ComplexField u = free_propagate(u0, t);
        const double sup = lp_norm(u, std::numeric_limits<double>::infinity());
        out.push_back({t, sup, std::pow(t, half_d) * sup});
    }
    return out;
}

double fitted_decay_exponent(const std::vector<DecaySample>& profile)
{
    if (profile.size() < 2)
        throw std::invalid_argument("decay fit needs at least two samples");
    double mx = 0.0, my = 0.0;
    for (const auto& s : profile) {
        if (!(s.sup_norm > 0.0))
            throw std::invalid_argument("decay fit needs positive sup norms");
        mx += std::log(s.time);
        my += std::log(s.sup_norm);
    }
    const double n = static_cast<double>(profile.size());
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& s : profile) {
        const double dx = std::log(s.time) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(s.sup_norm) - my);
    }
    return sxy / sxx;
}

} // namespace snls

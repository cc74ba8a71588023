#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace frackac {

// Hölder exponent estimate from dyadic lags: the log-log slope of the maximal
// increment at lag 2^j against the lag length. Clamped to [0.01, 1]; a
// constant sequence reports 1.
double estimate_holder_exponent(std::span<const double> grid, std::span<const double> values, int dim = 1);

// max over dyadic lags and positions of |x(t_{i+l}) - x(t_i)| / |t_{i+l} - t_i|^exponent
double dyadic_holder_seminorm(std::span<const double> grid, std::span<const double> values, int dim,
                              double exponent);

// A sampled path phi: [t0, T] -> R^d with piecewise-linear interpolation.
// values are stored row-major, one row of dim entries per grid point.
class HolderPath {
public:
    HolderPath() = default;
    HolderPath(std::vector<double> grid, std::vector<double> values, int dim = 1);

    // d = 1 path from a function on n+1 uniform points of [0, T]
    static HolderPath sample(const std::function<double(double)>& f, double T, std::size_t n);

    // Replaces the estimated exponent with a known one (e.g. 1 for smooth paths).
    HolderPath with_alpha(double alpha) const;

    int dim() const { return dim_; }
    std::size_t size() const { return grid_.size(); }
    double start() const { return grid_.front(); }
    double horizon() const { return grid_.back(); }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    bool uniform() const { return uniform_; }

    double alpha_est() const { return alpha_; }
    double sup_norm() const { return sup_; }
    double holder_norm_est() const { return holder_; }
    double holder_seminorm(double exponent) const;

    double value(double t) const;                      // d = 1 only
    void value(double t, std::span<double> out) const;  // any d
    std::span<const double> node(std::size_t i) const {
        return {values_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }

    // s -> x + phi(t - s) on [0, t], keeping every grid point of [start, t].
    HolderPath reversed(double t, std::span<const double> x) const;
    // s -> phi(s0 + s) on [0, len]
    HolderPath shifted(double s0, double len) const;

private:
    void locate(double t, std::size_t& i, double& w) const;

    std::vector<double> grid_;
    std::vector<double> values_;
    int dim_ = 1;
    bool uniform_ = false;
    double dt_ = 0.0;
    double alpha_ = 1.0;
    double sup_ = 0.0;
    double holder_ = 0.0;
};

}  // namespace frackac

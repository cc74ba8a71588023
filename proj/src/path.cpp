#include "frackac/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "frackac/errors.hpp"

namespace frackac {

namespace {

double dist(std::span<const double> v, std::size_t i, std::size_t j, int dim) {
    if (dim == 1) return std::abs(v[i] - v[j]);
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        double d = v[i * dim + k] - v[j * dim + k];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

double estimate_holder_exponent(std::span<const double> grid, std::span<const double> values, int dim) {
    std::size_t n = grid.size();
    if (n < 3) return 1.0;
    std::vector<double> lx, ly;
    for (std::size_t lag = 1; lag <= std::max<std::size_t>(1, (n - 1) / 4); lag *= 2) {
        double mx = 0.0, span_sum = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) {
            mx = std::max(mx, dist(values, i + lag, i, dim));
            span_sum += grid[i + lag] - grid[i];
        }
        if (mx > 0.0) {
            lx.push_back(std::log(span_sum / static_cast<double>(n - lag)));
            ly.push_back(std::log(mx));
        }
    }
    if (lx.size() < 2) return 1.0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= lx.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return std::clamp(sxy / sxx, 0.01, 1.0);
}

double dyadic_holder_seminorm(std::span<const double> grid, std::span<const double> values, int dim,
                              double exponent) {
    std::size_t n = grid.size();
    double best = 0.0;
    for (std::size_t lag = 1; lag < n; lag *= 2)
        for (std::size_t i = 0; i + lag < n; ++i) {
            double dt = grid[i + lag] - grid[i];
            best = std::max(best, dist(values, i + lag, i, dim) / std::pow(dt, exponent));
        }
    return best;
}

HolderPath::HolderPath(std::vector<double> grid, std::vector<double> values, int dim)
    : grid_(std::move(grid)), values_(std::move(values)), dim_(dim) {
    if (dim_ < 1) throw std::invalid_argument("HolderPath: dim must be >= 1");
    if (grid_.size() < 2) throw std::invalid_argument("HolderPath: need at least 2 grid points");
    if (values_.size() != grid_.size() * static_cast<std::size_t>(dim_))
        throw std::invalid_argument("HolderPath: values size must equal grid size times dim");
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1])) throw std::invalid_argument("HolderPath: grid must be strictly increasing");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("HolderPath: non-finite value");
    dt_ = (grid_.back() - grid_.front()) / static_cast<double>(grid_.size() - 1);
    uniform_ = true;
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (std::abs(grid_[i] - grid_[i - 1] - dt_) > 1e-9 * dt_) {
            uniform_ = false;
            break;
        }
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        double s = 0.0;
        for (int k = 0; k < dim_; ++k) s += values_[i * dim_ + k] * values_[i * dim_ + k];
        sup_ = std::max(sup_, std::sqrt(s));
    }
    alpha_ = estimate_holder_exponent(grid_, values_, dim_);
    holder_ = dyadic_holder_seminorm(grid_, values_, dim_, alpha_);
}

HolderPath HolderPath::sample(const std::function<double(double)>& f, double T, std::size_t n) {
    if (n < 1 || !(T > 0)) throw std::invalid_argument("HolderPath::sample: need n >= 1 and T > 0");
    std::vector<double> g(n + 1), v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        g[i] = T * static_cast<double>(i) / static_cast<double>(n);
        v[i] = f(g[i]);
    }
    return HolderPath(std::move(g), std::move(v), 1);
}

HolderPath HolderPath::with_alpha(double alpha) const {
    if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("with_alpha: need alpha in (0, 1]");
    HolderPath p = *this;
    p.alpha_ = alpha;
    p.holder_ = dyadic_holder_seminorm(grid_, values_, dim_, alpha);
    return p;
}

double HolderPath::holder_seminorm(double exponent) const {
    return dyadic_holder_seminorm(grid_, values_, dim_, exponent);
}

void HolderPath::locate(double t, std::size_t& i, double& w) const {
    double tol = 1e-12 * std::max(1.0, std::abs(grid_.back()));
    if (t < grid_.front() - tol || t > grid_.back() + tol)
        throw CoverageError("HolderPath: time " + std::to_string(t) + " outside [" + std::to_string(grid_.front()) +
                            ", " + std::to_string(grid_.back()) + "]");
    std::size_t n = grid_.size();
    if (uniform_) {
        double u = (t - grid_.front()) / dt_;
        double fl = std::floor(u);
        if (fl < 0) fl = 0;
        i = static_cast<std::size_t>(fl);
        if (i >= n - 1) i = n - 2;
    } else {
        auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
        i = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
        if (i >= n - 1) i = n - 2;
    }
    w = (t - grid_[i]) / (grid_[i + 1] - grid_[i]);
    w = std::clamp(w, 0.0, 1.0);
}

double HolderPath::value(double t) const {
    if (dim_ != 1) throw std::invalid_argument("HolderPath::value(t): scalar access on a multi-dimensional path");
    std::size_t i;
    double w;
    locate(t, i, w);
    if (w == 0.0) return values_[i];
    if (w == 1.0) return values_[i + 1];
    return (1.0 - w) * values_[i] + w * values_[i + 1];
}

void HolderPath::value(double t, std::span<double> out) const {
    std::size_t i;
    double w;
    locate(t, i, w);
    for (int k = 0; k < dim_; ++k) out[k] = (1.0 - w) * values_[i * dim_ + k] + w * values_[(i + 1) * dim_ + k];
}

HolderPath HolderPath::reversed(double t, std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("reversed: shift dimension mismatch");
    if (t > horizon() + 1e-12 * std::max(1.0, horizon()) || t <= start())
        throw CoverageError("reversed: t outside the path horizon");
    std::vector<double> g, v;
    std::vector<double> tmp(dim_);
    // s = 0 corresponds to path time t
    g.push_back(0.0);
    value(std::min(t, horizon()), tmp);
    for (int k = 0; k < dim_; ++k) v.push_back(x[k] + tmp[k]);
    double tol = 1e-9 * (uniform_ ? dt_ : 1.0);
    for (std::size_t j = grid_.size(); j-- > 0;) {
        double s = t - grid_[j];
        if (s <= tol) continue;
        g.push_back(s);
        for (int k = 0; k < dim_; ++k) v.push_back(x[k] + values_[j * dim_ + k]);
    }
    HolderPath p(std::move(g), std::move(v), dim_);
    p.alpha_ = alpha_;
    p.holder_ = p.holder_seminorm(alpha_);
    return p;
}

HolderPath HolderPath::shifted(double s0, double len) const {
    if (s0 < start() || s0 + len > horizon() + 1e-12 * std::max(1.0, horizon()) || !(len > 0))
        throw CoverageError("shifted: window outside the path horizon");
    std::vector<double> g, v;
    std::vector<double> tmp(dim_);
    g.push_back(0.0);
    value(s0, tmp);
    v.insert(v.end(), tmp.begin(), tmp.end());
    double tol = 1e-9 * (uniform_ ? dt_ : 1.0);
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        double s = grid_[j] - s0;
        if (s <= tol || s >= len - tol) continue;
        g.push_back(s);
        for (int k = 0; k < dim_; ++k) v.push_back(values_[j * dim_ + k]);
    }
    g.push_back(len);
    value(std::min(s0 + len, horizon()), tmp);
    v.insert(v.end(), tmp.begin(), tmp.end());
    HolderPath p(std::move(g), std::move(v), dim_);
    p.alpha_ = alpha_;
    p.holder_ = p.holder_seminorm(alpha_);
    return p;
}

}  // namespace frackac

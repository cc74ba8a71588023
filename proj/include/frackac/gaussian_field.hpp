#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "frackac/kernels.hpp"
#include "frackac/rng.hpp"
#include "frackac/spatial_kernels.hpp"

namespace frackac {

struct GridSpec {
    std::vector<double> times;  // may include negative times
    std::vector<double> sites;  // d = 1
    HurstParams h{0.25};
    SpatialKernel kernel;

    static constexpr std::size_t kMaxTimes = 4096;
    static constexpr std::size_t kMaxSites = 512;

    void validate() const;

    // times k*dt for k0 <= k <= k1 (so 0 is a node), n_sites uniform sites on [x0, x1]
    static GridSpec uniform(double dt, long k0, long k1, double x0, double x1, std::size_t n_sites,
                            HurstParams h, SpatialKernel kernel);
    // grid covering [-eps_max, t_max + eps_max] with step dt
    static GridSpec covering(double t_max, double eps_max, double dt, double x0, double x1, std::size_t n_sites,
                             HurstParams h, SpatialKernel kernel);
};

struct FieldSample {
    std::shared_ptr<const GridSpec> spec;
    Eigen::MatrixXd values;  // times x sites
    RngSeed seed{};

    // bilinear interpolation; CoverageError names the missing coordinate
    double operator()(double t, double x) const;
};

// Sparse linear functional of the grid values: sum of w * W(times[i], sites[j]).
struct LinearFunctional {
    struct Term {
        std::size_t i, j;
        double w;
    };
    std::vector<Term> terms;

    void add_point(const GridSpec& g, double t, double x, double w);  // bilinear weights
    double apply(const Eigen::MatrixXd& values) const;
};

LinearFunctional wdot_functional(const GridSpec& g, double s, double x, double eps);
// int_0^t wdot_eps(s, x) ds by the trapezoid rule at the grid step
LinearFunctional mollified_w_functional(const GridSpec& g, double t, double x, double eps);
// int_0^t wdot_eps(s, path(s)) ds by the trapezoid rule at the grid step
LinearFunctional integral_eps_functional(const GridSpec& g, const HolderPath& phi, double t, double eps);

// Trapezoid nodes on [0, t]: step close to the smallest grid step, t itself a node.
std::vector<double> trapezoid_nodes(const GridSpec& g, double t);

// F with F F^T = G. Rows and columns with zero diagonal are left out of the
// factorization (their rows of F are zero); the rest uses Cholesky, retried
// once with 1e-12 * trace added to the diagonal.
Eigen::MatrixXd gram_factor(const Eigen::MatrixXd& gram, const char* axis);

Eigen::MatrixXd temporal_gram(const std::vector<double>& times, HurstParams h);
Eigen::MatrixXd spatial_gram(const std::vector<double>& sites, const SpatialKernel& q);

// Factorizes once, then draws W = F_t Z F_x^T for many seeds. Z is filled
// row by row (time-major) from NormalStream(seed).
class FieldSimulator {
public:
    explicit FieldSimulator(GridSpec spec);

    FieldSample sample(RngSeed seed) const;
    const GridSpec& spec() const { return *spec_; }
    const Eigen::MatrixXd& time_factor() const { return ft_; }
    const Eigen::MatrixXd& space_factor() const { return fx_; }

    // B = F_t^T A F_x, so that L(W) = <B, Z> for the Z behind a sample
    Eigen::MatrixXd project(const LinearFunctional& L) const;

private:
    std::shared_ptr<const GridSpec> spec_;
    Eigen::MatrixXd ft_, fx_;
};

FieldSample simulate_field(const GridSpec& spec, RngSeed seed);

// Draws of a fixed family of linear functionals of W.
//  - pathwise(seed) reproduces L_k(simulate_field(spec, seed)) up to rounding;
//  - draw(seed) samples the same joint Gaussian law from its k x k covariance,
//    at a cost independent of the grid size.
class FunctionalSampler {
public:
    FunctionalSampler(const FieldSimulator& sim, std::vector<LinearFunctional> fns);

    std::size_t size() const { return proj_.size(); }
    const Eigen::MatrixXd& covariance() const { return cov_; }
    std::vector<double> pathwise(RngSeed seed) const;
    std::vector<double> draw(RngSeed seed) const;

private:
    std::vector<Eigen::MatrixXd> proj_;
    Eigen::MatrixXd cov_;
    Eigen::MatrixXd chol_;
};

double wdot_eps(const FieldSample& field, double s, double x, double eps);
double mollified_w(const FieldSample& field, double t, double x, double eps);

}  // namespace frackac

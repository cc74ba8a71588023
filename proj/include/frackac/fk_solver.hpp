#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "frackac/gaussian_field.hpp"
#include "frackac/parallel.hpp"
#include "frackac/path.hpp"
#include "frackac/rng.hpp"
#include "frackac/spatial_kernels.hpp"

namespace frackac {

struct BrownianPath {
    HolderPath path;  // B on a uniform grid of [0, T], B(0) = 0
    double sup_norm = 0.0;
    double holder_norm = 0.0;  // dyadic seminorm of order kHolderOrder

    static constexpr double kHolderOrder = 0.45;
    explicit BrownianPath(HolderPath p);
};

// One path from its own stream; n_steps = round(t_max / dt)
BrownianPath brownian_path(RngSeed seed, double t_max, double dt, int d = 1);
// Path k uses seed.child(k).
std::vector<BrownianPath> sample_brownian(std::size_t n, double t_max, double dt, int d, RngSeed seed);

struct InitialCondition {
    std::function<double(std::span<const double>)> f;
    double bound = 1.0;  // sup |u0|; infinite values are refused by the solvers
    double lipschitz = -1.0;  // < 0: unknown
    std::string name = "custom";

    double operator()(std::span<const double> y) const { return f(y); }

    static InitialCondition constant(double c);
    static InitialCondition gaussian(double a);  // exp(-a |y|^2)
    static InitialCondition linear();            // y_1, unbounded (heat_semigroup checks only)
    static InitialCondition cosine(double k);    // cos(k y_1)
};

struct FkOptions {
    double dt = 0.0;        // Brownian step; <= 0 selects 2^-10 t
    int workers = 0;        // <= 0: default_workers()
    double overflow = 700;  // exponents above this reject the sample
};

// variance_closed along s -> x + B(t - s), product integration on the path grid
double sigma2_along_path(const BrownianPath& b, double t, std::span<const double> x, HurstParams h,
                         const SpatialKernel& q);
double sigma2_along_path(const BrownianPath& b, double t, double x, HurstParams h, const SpatialKernel& q);

MCEstimate u_mean(double t, std::span<const double> x, const InitialCondition& u0, std::size_t n_paths,
                  HurstParams h, const SpatialKernel& q, RngSeed seed, const FkOptions& opt = {});

MCEstimate u_second_moment(double t, std::span<const double> x, std::span<const double> y,
                           const InitialCondition& u0, std::size_t n_pairs, HurstParams h, const SpatialKernel& q,
                           RngSeed seed, const FkOptions& opt = {});

// MC over B of u0(B^x_t) exp(int_0^t Wdot^eps(s, B^x_{t-s}) ds) for one field; d = 1
MCEstimate u_pathwise_eps(const FieldSample& field, double t, double x, const InitialCondition& u0,
                          std::size_t n_paths, double eps, RngSeed seed, const FkOptions& opt = {});

// E u0(x + sqrt(t) Z) by tensor Gauss-Hermite; NumericalError beyond 1e-8 between two rule sizes
double heat_semigroup(const InitialCondition& u0, double t, std::span<const double> x);
double heat_semigroup(const InitialCondition& u0, double t, double x);

struct WickMoments {
    MCEstimate mean_x;
    MCEstimate second_moment_xy;
};

// second moment is skipped (n = 0) when with_second is false
WickMoments wick_moments(double t, std::span<const double> x, std::span<const double> y, const InitialCondition& u0,
                         std::size_t n_pairs, HurstParams h, const SpatialKernel& q, RngSeed seed,
                         const FkOptions& opt = {}, bool with_second = true);

struct ChaosPoint {
    double r;
    std::vector<double> z;
};

// signed indicator 1_[0,a](z), equal to -1_[a,0](z) for a < 0, per component
double signed_indicator(std::span<const double> a, std::span<const double> z);

MCEstimate chaos_coeff(std::size_t n, double t, std::span<const double> x, const std::vector<ChaosPoint>& pts,
                       const InitialCondition& u0, std::size_t n_paths, HurstParams h, const SpatialKernel& q,
                       RngSeed seed, const FkOptions& opt = {});

}  // namespace frackac

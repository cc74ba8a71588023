#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "frackac/rng.hpp"

namespace frackac {

enum class KernelKind { Constant, FbmSpace, Smooth, Custom };

// Spatial covariance Q(x, y) with declared regularity metadata:
//   (Q1) |Q(x,y)| <= c0 (1+K)^m            for |x|, |y| <= K
//   (Q2) |Q(x,y) - Q(u,v)| <= c1 (1+K)^m (|x-u|^gamma + |y-v|^gamma)
struct SpatialKernel {
    KernelKind kind = KernelKind::Constant;
    double param = 1.0;  // c, k or ell depending on kind
    double scale = 1.0;
    double gamma = 1.0;
    double m = 0.0;
    double c0 = 1.0;
    double c1 = 1.0;
    int dim = 1;
    std::function<double(std::span<const double>, std::span<const double>)> custom;

    double operator()(std::span<const double> x, std::span<const double> y) const;
    double eval1(double x, double y) const;

    // c * Q, with c0 and c1 scaled accordingly
    SpatialKernel scaled(double c) const;
    std::string name() const;
};

SpatialKernel make_constant(double c, int d = 1);
SpatialKernel make_fbm_space(double k, int d = 1);
SpatialKernel make_smooth(double ell, int d = 1);

struct Q12Report {
    double max_violation_q1 = 0.0;
    double max_violation_q2 = 0.0;
};

Q12Report verify_q1_q2(const SpatialKernel& q, double K, std::size_t n_samples, RngSeed seed = {0x51ULL, 0});

// H > 1/2 - gamma/4
bool solver_gate(double h, double gamma);
// Throws GateError naming the inequality when the gate fails.
void require_solver_gate(double h, const SpatialKernel& q);

// (smallest eigenvalue) / trace of the Gram matrix on d = 1 points
double gram_min_eigen_ratio(const SpatialKernel& q, std::span<const double> points);

}  // namespace frackac

#pragma once

#include <vector>

#include "frackac/gaussian_field.hpp"
#include "frackac/kernels.hpp"
#include "frackac/path.hpp"
#include "frackac/quadrature.hpp"
#include "frackac/spatial_kernels.hpp"

namespace frackac {

QuadratureSpec stoch_default_spec();

// int_0^t wdot_eps(s, phi(s)) ds on the field's time resolution (trapezoid)
double integral_eps(const FieldSample& field, const HolderPath& phi, double t, double eps);

// E(I_eps(phi) I_delta(phi)) = int_0^t int_0^theta Q(phi_theta, phi_{theta-r}) V_{eps,delta}(r) dr dtheta
double cross_moment(const HolderPath& phi, double t, double eps, double delta, HurstParams h,
                    const SpatialKernel& q, const QuadratureSpec& spec = stoch_default_spec());

enum class VarianceMethod {
    Auto,      // Graded for paths with few nodes, PathGrid otherwise
    Graded,    // double quadrature with breaks at every path node
    PathGrid,  // product integration on a uniform path grid (t must be a node)
};

// Limit second moment of int_0^t W(ds, phi_s). Refuses unless gamma * alpha > 1 - 2H.
double variance_closed(const HolderPath& phi, double t, HurstParams h, const SpatialKernel& q,
                       const QuadratureSpec& spec = stoch_default_spec(), VarianceMethod method = VarianceMethod::Auto);

double covariance_closed(const HolderPath& phi, const HolderPath& psi, double t, HurstParams h,
                         const SpatialKernel& q, const QuadratureSpec& spec = stoch_default_spec(),
                         VarianceMethod method = VarianceMethod::Auto);

// E(int_s^t W^eps(dr, phi_r))^2
double increment_second_moment_eps(const HolderPath& phi, double s, double t, double eps, HurstParams h,
                                   const SpatialKernel& q, const QuadratureSpec& spec = stoch_default_spec());

// E[Wdot^eps(s, x) Wdot^eps(u, y)] / Q(x, y) as a function of d = s - u
double mollified_time_cov(double d, double eps, HurstParams h);

// Exact E[J(phi) J(psi)] for the trapezoid sums J(phi) = sum_i w_i Wdot^eps(s_i, phi(s_i))
// on n uniform steps of [0, t_phi] (and m steps of [0, t_psi]).
double discrete_moment(const HolderPath& phi, double t_phi, std::size_t n, const HolderPath& psi, double t_psi,
                       std::size_t m, double eps, HurstParams h, const SpatialKernel& q);

// Checks gamma * alpha > 1 - 2H and throws GateError naming the inequality.
void require_integral_gate(const HolderPath& phi, HurstParams h, const SpatialKernel& q, const char* who);

}  // namespace frackac

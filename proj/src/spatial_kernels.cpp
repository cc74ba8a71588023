#include "frackac/spatial_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "frackac/errors.hpp"

namespace frackac {

namespace {

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double dist(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
}

}  // namespace

double SpatialKernel::operator()(std::span<const double> x, std::span<const double> y) const {
    switch (kind) {
        case KernelKind::Constant: return scale;
        case KernelKind::FbmSpace: {
            double e = 2.0 * param;
            return scale * 0.5 * (std::pow(norm(x), e) + std::pow(norm(y), e) - std::pow(dist(x, y), e));
        }
        case KernelKind::Smooth: {
            double r = dist(x, y) / param;
            return scale * std::exp(-r * r);
        }
        case KernelKind::Custom: return scale * custom(x, y);
    }
    return 0.0;
}

double SpatialKernel::eval1(double x, double y) const {
    switch (kind) {
        case KernelKind::Constant: return scale;
        case KernelKind::FbmSpace: {
            double e = 2.0 * param;
            return scale * 0.5 * (std::pow(std::abs(x), e) + std::pow(std::abs(y), e) - std::pow(std::abs(x - y), e));
        }
        case KernelKind::Smooth: {
            double r = (x - y) / param;
            return scale * std::exp(-r * r);
        }
        case KernelKind::Custom: {
            double a[1] = {x}, b[1] = {y};
            return scale * custom(a, b);
        }
    }
    return 0.0;
}

SpatialKernel SpatialKernel::scaled(double c) const {
    if (!(c >= 0)) throw std::invalid_argument("scaled: factor must be >= 0");
    SpatialKernel q = *this;
    q.scale *= c;
    q.c0 *= c;
    q.c1 *= c;
    return q;
}

std::string SpatialKernel::name() const {
    std::ostringstream os;
    switch (kind) {
        case KernelKind::Constant: os << "constant(c=" << scale << ")"; break;
        case KernelKind::FbmSpace: os << "fbm_space(k=" << param << ")"; break;
        case KernelKind::Smooth: os << "smooth(ell=" << param << ")"; break;
        case KernelKind::Custom: os << "custom"; break;
    }
    if (kind != KernelKind::Constant && scale != 1.0) os << "*" << scale;
    return os.str();
}

SpatialKernel make_constant(double c, int d) {
    if (!(c >= 0)) throw std::invalid_argument("make_constant: c must be >= 0");
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    SpatialKernel q;
    q.kind = KernelKind::Constant;
    q.param = c;
    q.scale = c;
    q.gamma = 1.0;
    q.m = 0.0;
    q.c0 = c;
    q.c1 = 1.0;
    q.dim = d;
    return q;
}

SpatialKernel make_fbm_space(double k, int d) {
    if (!(k > 0 && k <= 0.5)) throw std::invalid_argument("make_fbm_space: k must lie in (0, 1/2]");
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    SpatialKernel q;
    q.kind = KernelKind::FbmSpace;
    q.param = k;
    q.gamma = 2.0 * k;
    q.m = 2.0 * k;
    // |Q(x,y)| <= |x|^k |y|^k by Cauchy-Schwarz; subadditivity of r^{2k} gives c1 = 1
    q.c0 = 1.0;
    q.c1 = 1.0;
    q.dim = d;
    return q;
}

SpatialKernel make_smooth(double ell, int d) {
    if (!(ell > 0)) throw std::invalid_argument("make_smooth: ell must be > 0");
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    SpatialKernel q;
    q.kind = KernelKind::Smooth;
    q.param = ell;
    q.gamma = 1.0;
    q.m = 0.0;
    q.c0 = 1.0;
    // sup |d/dz exp(-z^2/ell^2)| = sqrt(2/e)/ell
    q.c1 = std::sqrt(2.0 / std::exp(1.0)) / ell;
    q.dim = d;
    return q;
}

Q12Report verify_q1_q2(const SpatialKernel& q, double K, std::size_t n_samples, RngSeed seed) {
    if (n_samples < 1) throw std::invalid_argument("verify_q1_q2: n_samples must be >= 1");
    if (!(K > 0)) throw std::invalid_argument("verify_q1_q2: K must be > 0");
    NormalStream rng(seed);
    int d = q.dim;
    double env = std::pow(1.0 + K, q.m);
    // points uniform in the cube of half-width K/sqrt(d), so |x| <= K
    double half = K / std::sqrt(static_cast<double>(d));
    auto draw = [&](std::vector<double>& v) {
        for (auto& c : v) c = half * (2.0 * rng.uniform() - 1.0);
    };
    std::vector<double> x(d), y(d), u(d), v(d);
    Q12Report rep{-INFINITY, -INFINITY};
    for (std::size_t i = 0; i < n_samples; ++i) {
        draw(x);
        draw(y);
        rep.max_violation_q1 = std::max(rep.max_violation_q1, std::abs(q(x, y)) - q.c0 * env);
        // perturbations over many scales so near pairs are exercised
        double sc = std::pow(10.0, -6.0 * rng.uniform()) * half;
        for (int k = 0; k < d; ++k) {
            u[k] = std::clamp(x[k] + sc * (2.0 * rng.uniform() - 1.0), -half, half);
            v[k] = std::clamp(y[k] + sc * (2.0 * rng.uniform() - 1.0), -half, half);
        }
        if (i % 2 == 1) v = y;
        double lhs = std::abs(q(x, y) - q(u, v));
        double rhs = q.c1 * env * (std::pow(dist(x, u), q.gamma) + std::pow(dist(y, v), q.gamma));
        rep.max_violation_q2 = std::max(rep.max_violation_q2, lhs - rhs);
    }
    return rep;
}

bool solver_gate(double h, double gamma) { return h > 0.5 - gamma / 4.0; }

void require_solver_gate(double h, const SpatialKernel& q) {
    if (!solver_gate(h, q.gamma)) {
        std::ostringstream os;
        os << "need H > 1/2 - gamma/4 (H = " << h << ", gamma = " << q.gamma << ", bound " << 0.5 - q.gamma / 4.0
           << ")";
        throw GateError(os.str());
    }
}

double gram_min_eigen_ratio(const SpatialKernel& q, std::span<const double> points) {
    std::size_t n = points.size();
    Eigen::MatrixXd G(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) G(i, j) = q.eval1(points[i], points[j]);
    double tr = G.trace();
    if (tr == 0.0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() / tr;
}

}  // namespace frackac

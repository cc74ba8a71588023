#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "frackac/errors.hpp"
#include "frackac/kernels.hpp"
#include "frackac/path.hpp"
#include "frackac/spatial_kernels.hpp"

using namespace frackac;

TEST(Covariance, Examples) {
    EXPECT_DOUBLE_EQ(r_h(1, 1, HurstParams(0.3)), 1.0);
    EXPECT_NEAR(r_h(1, -1, HurstParams(0.4)), 0.5 * (2 - std::pow(2.0, 0.8)), 1e-15);
    EXPECT_EQ(r_h(0, 5, HurstParams(0.45)), 0.0);
    EXPECT_THROW(HurstParams(0.5), std::invalid_argument);
    EXPECT_THROW(HurstParams(0.0), std::invalid_argument);
}

TEST(VKernel, EqualWidthsReduceToFeps) {
    HurstParams h(0.35);
    for (double r : {0.01, 0.2, 0.5, 1.0, 3.0})
        for (double e : {0.3, 0.05, 1e-3}) EXPECT_NEAR(v_kernel(r, e, e, h), f_eps(r, e, 2 * h.h), 1e-9 * (1 + std::abs(f_eps(r, e, 2 * h.h))));
}

TEST(VKernel, SmallWidthLimit) {
    HurstParams h(0.4);
    EXPECT_NEAR(v_kernel(1.0, 1e-4, 1e-4, h), 2 * 0.4 * (2 * 0.4 - 1), 1e-6);
}

TEST(VKernel, ControlBoundExample) {
    HurstParams h(0.3);
    double v = v_kernel(0.5, 0.3, 0.2, h);
    EXPECT_LE(std::abs(v), 64 * std::pow(0.5, 2 * 0.3 - 2));
    // direct evaluation of the four-term formula
    auto p = [](double x) { return std::pow(std::abs(x), 0.6); };
    double direct = (p(0.5 + 0.5) + p(0.5 - 0.5) - p(0.5 + 0.1) - p(0.5 - 0.1)) / (4 * 0.3 * 0.2);
    EXPECT_NEAR(v, direct, 1e-12);
}

TEST(VKernel, IntegralsMatchQuadratureOfKernel) {
    HurstParams h(0.3);
    double e = 0.05, d = 0.02, s = 0.7;
    // midpoint rule on a fine grid against the closed antiderivative, kinks at e - d and e + d
    double sum = 0;
    int n = 200000;
    for (int i = 0; i < n; ++i) sum += v_kernel((i + 0.5) * s / n, e, d, h);
    EXPECT_NEAR(v_kernel_integral(s, e, d, h), sum * s / n, 1e-6);
    double sum2 = 0;
    int m = 4000;
    for (int i = 0; i < m; ++i) sum2 += v_kernel_integral((i + 0.5) * s / m, e, d, h);
    EXPECT_NEAR(v_kernel_double_integral(s, e, d, h), sum2 * s / m, 1e-6);
}

TEST(Feps, Examples) {
    EXPECT_NEAR(f_eps(1.0, 1e-5, 0.8), 0.8 * (-0.2), 1e-6);
    EXPECT_LE(std::abs(f_eps(0.01, 1.0, 0.5)), 64 * std::pow(0.01, -1.5));
    EXPECT_NEAR(f_eps(2.0, 0.5, 1.0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(f_eps_limit(1.0, 0.8), -0.16);
    EXPECT_THROW(f_eps(-1.0, 0.1, 0.5), std::invalid_argument);
    EXPECT_THROW(f_eps(1.0, 0.1, 2.0), std::invalid_argument);
}

TEST(Geps, Examples) {
    EXPECT_NEAR(g_eps(1.0, 1e-5, HurstParams(0.3)), -0.4, 1e-4);
    EXPECT_NEAR(g_eps(0.1, 0.1, HurstParams(0.4)), std::pow(0.2, -0.2) / 0.2, 1e-12);
    EXPECT_THROW(g_eps(0.0, 0.1, HurstParams(0.3)), std::invalid_argument);
}

// The printed large-u bound (1-2H) u^{2H-2} does not hold; the shifted form does.
TEST(Geps, LargeUBoundIsTheShiftedOne) {
    HurstParams h(0.3);
    double e = 0.1, u = 3 * e;
    double g = std::abs(g_eps(u, e, h));
    EXPECT_GT(g, (1 - 2 * h.h) * std::pow(u, 2 * h.h - 2));
    EXPECT_LE(g, (1 - 2 * h.h) * std::pow(u - e, 2 * h.h - 2));
}

TEST(InnerStep, ConstantPathGivesCovariance) {
    HurstParams h(0.3);
    for (auto [s, t] : {std::pair{0.4, 0.9}, std::pair{1.0, 0.3}, std::pair{0.7, 0.7}})
        EXPECT_NEAR(inner_step([](double) { return 1.0; }, s, t, h), r_h(s, t, h), 1e-10);
}

TEST(InnerStep, StepFunctionOracle) {
    HurstParams h(0.35);
    std::vector<double> knots{0.0, 0.3, 0.55, 1.0};
    std::vector<double> a{1.5, -0.7, 2.0};
    auto phi = [&](double r) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (r < knots[i + 1]) return a[i];
        return a.back();
    };
    std::vector<double> br{0.3, 0.55};
    double t = 0.8, s = 1.0, H = h.h;
    double want = 0;
    auto P = [&](double x) { return std::pow(std::abs(x), 2 * H); };
    for (std::size_t i = 0; i < a.size(); ++i)
        want += a[i] * 0.5 * (P(knots[i + 1]) - P(knots[i]) + P(t - knots[i]) - P(t - knots[i + 1]));
    EXPECT_NEAR(inner_step(phi, s, t, h, br), want, 1e-8);
}

TEST(InnerStep, LinearPathGradedReference) {
    // phi(r) = r, s = t = 1, H = 0.25: H int_0^1 r (r^{-1/2} + (1-r)^{-1/2}) dr = H (2/3 + 4/3)
    HurstParams h(0.25);
    EXPECT_NEAR(inner_step([](double r) { return r; }, 1.0, 1.0, h), 0.25 * 2.0, 1e-8);
}

TEST(InnerInterval, Linearity) {
    HurstParams h(0.3);
    auto phi = [](double r) { return std::cos(2 * r) + r; };
    double s = 0.5, u = 0.2, t = 1.0;
    EXPECT_NEAR(inner_interval([](double) { return 1.0; }, s, u, t, h), r_h(s, t, h) - r_h(s, u, h), 1e-10);
    EXPECT_NEAR(inner_interval(phi, s, u, t, h), inner_step(phi, s, t, h) - inner_step(phi, s, u, h), 1e-9);
}

TEST(MollifiedInner, ConstantPathAndLinearPath) {
    HurstParams h(0.3);
    HolderPath c = HolderPath::sample([](double) { return 2.0; }, 1.0, 1).with_alpha(1.0);
    EXPECT_NEAR(mollified_inner_limit(c, 0.6, h), 2.0 * 0.3 * std::pow(0.6, 2 * 0.3 - 1), 1e-9);
    HurstParams h4(0.4);
    HolderPath l = HolderPath::sample([](double s) { return s; }, 1.0, 1).with_alpha(1.0);
    // H s^{2H-1} phi(s) + H(2H-1) int_0^1 (-r) r^{2H-2} dr = H - (2H-1)/2
    EXPECT_NEAR(mollified_inner_limit(l, 1.0, h4), 0.4 + 0.1, 1e-8);
    double lim = mollified_inner_limit(l, 1.0, h4);
    double prev = INFINITY;
    for (int k = 4; k <= 10; k += 2) {
        double d = std::abs(mollified_inner_eps(l, 1.0, std::ldexp(1.0, -k), h4) - lim);
        EXPECT_LT(d, prev);
        prev = d;
    }
}

TEST(SpatialKernel, Constant) {
    auto q = make_constant(4.0);
    EXPECT_EQ(q.eval1(0.3, -2.0), 4.0);
    auto r = verify_q1_q2(q, 3.0, 1000);
    EXPECT_LE(r.max_violation_q1, 0.0);
    EXPECT_LE(r.max_violation_q2, 0.0);
}

TEST(SpatialKernel, FbmSpace) {
    auto q = make_fbm_space(0.35);
    EXPECT_EQ(q.eval1(0.0, 1.7), 0.0);
    EXPECT_NEAR(q.eval1(-1.3, -1.3), std::pow(1.3, 0.7), 1e-15);
    NormalStream ns(RngSeed{3, 0});
    std::vector<double> pts(32);
    for (auto& p : pts) p = -2 + 4 * ns.uniform();
    EXPECT_GE(gram_min_eigen_ratio(q, pts), -1e-12);
    auto q25 = make_fbm_space(0.25);
    auto r = verify_q1_q2(q25, 2.0, 10000);
    EXPECT_LE(r.max_violation_q1, 0.0);
    EXPECT_LE(r.max_violation_q2, 0.0);
    q25.c1 = 1e-3;
    EXPECT_GT(verify_q1_q2(q25, 2.0, 10000).max_violation_q2, 0.0);
    EXPECT_THROW(make_fbm_space(0.6), std::invalid_argument);
}

TEST(SpatialKernel, Smooth) {
    auto q = make_smooth(0.8);
    NormalStream ns(RngSeed{4, 0});
    for (int i = 0; i < 1000; ++i) {
        double x = 4 * ns.normal(), y = 4 * ns.normal();
        EXPECT_EQ(q.eval1(x, x), 1.0);
        EXPECT_EQ(q.eval1(x, y), q.eval1(y, x));
        EXPECT_LE(q.eval1(x, y), 1.0);
    }
    auto r = verify_q1_q2(q, 3.0, 10000);
    EXPECT_LE(r.max_violation_q2, 0.0);
}

TEST(SpatialKernel, SolverGate) {
    EXPECT_TRUE(solver_gate(0.3, 1.0));
    EXPECT_FALSE(solver_gate(0.2, 1.0));
    EXPECT_NO_THROW(require_solver_gate(0.3, make_smooth(1.0)));
    EXPECT_THROW(require_solver_gate(0.3, make_fbm_space(0.1)), GateError);
}

TEST(HolderPath, ExponentEstimates) {
    auto lin = HolderPath::sample([](double s) { return 3 * s; }, 1.0, 256);
    EXPECT_GT(lin.alpha_est(), 0.9);
    auto sq = HolderPath::sample([](double s) { return std::sqrt(s); }, 1.0, 4096);
    EXPECT_LT(sq.alpha_est(), 0.7);
    EXPECT_THROW(lin.value(1.5), CoverageError);
}

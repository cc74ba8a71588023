#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "frackac/parallel.hpp"
#include "frackac/quadrature.hpp"
#include "frackac/rng.hpp"

using namespace frackac;

// Random123 known-answer vectors for Philox4x32-10
TEST(Philox, KnownAnswers) {
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;
    EXPECT_EQ(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32(A4{~0u, ~0u, ~0u, ~0u}, A2{~0u, ~0u}), (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
    RngSeed s{42, 0};
    NormalStream a(s.child(3)), b(s.child(3)), c(s.child(4));
    bool differ = false;
    for (int i = 0; i < 100; ++i) {
        double x = a.normal();
        EXPECT_EQ(x, b.normal());
        differ |= x != c.normal();
    }
    EXPECT_TRUE(differ);
    EXPECT_EQ(s.child(1).child(2), s.child(1).child(2));
    EXPECT_FALSE(s.child(1).child(2) == s.child(2).child(1));
}

TEST(Rng, NormalMoments) {
    NormalStream ns(RngSeed{7, 0});
    std::vector<double> x(200000);
    ns.fill(x);
    double m = pairwise_sum(x) / x.size();
    double v = 0;
    for (double y : x) v += (y - m) * (y - m);
    v /= x.size() - 1;
    EXPECT_NEAR(m, 0.0, 4 / std::sqrt(x.size()));
    EXPECT_NEAR(v, 1.0, 4 * std::sqrt(2.0 / x.size()));
}

TEST(Parallel, WorkerCountDoesNotChangeResults) {
    auto run = [](int w) {
        std::vector<double> out(1000);
        parallel_for(out.size(), w, [&](std::size_t i) { out[i] = NormalStream(RngSeed{1, 0}.child(i)).normal(); });
        return summarize(out, RngSeed{1, 0});
    };
    MCEstimate a = run(1), b = run(3);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Parallel, PairwiseSumIsExactOnIntegers) {
    std::vector<double> x(12345);
    std::iota(x.begin(), x.end(), 1.0);
    EXPECT_EQ(pairwise_sum(x), 12345.0 * 12346.0 / 2);
}

TEST(Quadrature, InverseSqrt) {
    auto r = singular_quad([](double r) { return 1 / std::sqrt(r); }, 0.0, 1.0, -0.5);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 2.0, 1e-8);
}

TEST(Quadrature, PowerSingularity) {
    double H = 0.4, a = 0.5;
    auto r = singular_quad([&](double r) { return std::pow(r, 2 * H - 2 + a); }, 0.0, 1.0, 2 * H - 2 + a);
    EXPECT_NEAR(r.value, 1 / 0.3, 1e-8);
    EXPECT_LE(std::abs(r.value - 1 / 0.3), 2 * r.error_estimate + 1e-14);
}

TEST(Quadrature, SmoothMatchesReference) {
    // int_0^1 exp(x) cos(3x) dx
    double ref = (std::exp(1.0) * (std::cos(3.0) + 3 * std::sin(3.0)) - 1) / 10;
    auto r = singular_quad([](double x) { return std::exp(x) * std::cos(3 * x); }, 0.0, 1.0, kRegular);
    EXPECT_NEAR(r.value, ref, 1e-10);
}

TEST(Quadrature, GradingConvergesOnSingularFamily) {
    for (double p : {-0.9, -0.6, -0.3}) {
        auto r = singular_quad([&](double r) { return std::pow(r, p) * std::cos(r); }, 0.0, 1.0, p);
        // series: sum (-1)^k / ((2k)! (p + 2k + 1))
        double ref = 0, fact = 1;
        for (int k = 0; k < 20; ++k) {
            if (k > 0) fact *= (2 * k - 1) * (2 * k);
            ref += (k % 2 ? -1 : 1) / (fact * (p + 2 * k + 1));
        }
        EXPECT_NEAR(r.value, ref, 1e-9) << "p = " << p;
    }
}

TEST(Quadrature, DoubleQuadClosedForm) {
    double H = 0.3, t = 0.8;
    DoubleQuadOptions o;
    o.p_r0 = 2 * H - 1;
    auto r = double_quad([&](double, double r) { return std::pow(r, 2 * H - 1); }, t, o);
    EXPECT_NEAR(r.value, std::pow(t, 2 * H + 1) / (2 * H * (2 * H + 1)), 1e-6);
}

TEST(Quadrature, DoubleQuadRIndependent) {
    double t = 1.3;
    auto r = double_quad([](double th, double) { return std::sin(th); }, t, {});
    EXPECT_NEAR(r.value, std::sin(t) - t * std::cos(t), 1e-8);
}

TEST(Quadrature, FailureCarriesBestValue) {
    QuadratureSpec s;
    s.target_abs_tol = 1e-300;
    auto r = singular_quad([](double r) { return std::pow(r, -0.5); }, 0.0, 1.0, -0.5, s);
    EXPECT_FALSE(r.converged);
    try {
        r.value_or_throw("tight");
        FAIL();
    } catch (const std::exception&) {
    }
}

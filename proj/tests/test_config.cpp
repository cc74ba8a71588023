#include <string>

#include <gtest/gtest.h>

#include "frackac/config.hpp"
#include "frackac/errors.hpp"

using namespace frackac;

namespace {

std::string error_of(const std::string& text, bool solver = false) {
    try {
        validate_config(parse_config(text, "t.cfg"), solver);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Config, MinimalFileFillsDefaults) {
    Config c = parse_config("h = 0.35\nkernel = fbm_space\nseed = 7\n");
    EXPECT_EQ(c.h, 0.35);
    EXPECT_EQ(c.kernel, "fbm_space");
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.eps_ladder.size(), 9u);
    EXPECT_EQ(c.tol("closed_form"), 1e-8);
    bool saw_dt = false;
    for (auto& [k, v] : c.echo())
        if (k == "dt") saw_dt = v == "0.0009765625";
    EXPECT_TRUE(saw_dt);
}

TEST(Config, Grammar) {
    Config c = parse_config("# comment\n\nh = 0.4   # trailing\neps_ladder = 0.5, 0.25,0.125\nfk.x = 0.1\n"
                            "tolerances.slope = 0.2\n");
    EXPECT_EQ(c.eps_ladder.size(), 3u);
    EXPECT_EQ(c.get("fk.x", 0.0), 0.1);
    EXPECT_EQ(c.tol("slope"), 0.2);
}

TEST(Config, ErrorsCarryLineNumbers) {
    auto msg = [](const std::string& t) {
        try {
            parse_config(t, "f.cfg");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(msg("h = 0.3\nbogus = 1\n").find("f.cfg:2"), std::string::npos);
    EXPECT_NE(msg("h = 0.3\n\nh = 0.2\n").find("f.cfg:3"), std::string::npos);
    EXPECT_NE(msg("h 0.3\n").find("f.cfg:1"), std::string::npos);
    EXPECT_NE(msg("h = abc\n").find("f.cfg:1"), std::string::npos);
    EXPECT_NE(msg("tolerances.nope = 1\n").find("unknown tolerance"), std::string::npos);
}

TEST(Config, HurstOutOfRange) {
    EXPECT_NE(error_of("h = 0.6\n").find("h must lie in (0, 1/2)"), std::string::npos);
}

TEST(Config, SolverGate) {
    EXPECT_EQ(error_of("h = 0.3\nkernel = smooth\n", true), "");
    EXPECT_NE(error_of("h = 0.2\nkernel = smooth\n", true).find("H > 1/2 - gamma/4"), std::string::npos);
    EXPECT_THROW(validate_config(parse_config("h = 0.2\nkernel = smooth\n"), true), GateError);
    EXPECT_EQ(error_of("h = 0.2\nkernel = smooth\n", false), "");
}

TEST(Config, AllViolationsReported) {
    std::string m = error_of("h = 0.7\ndt = 2\nn_paths = 0\n");
    EXPECT_NE(m.find("h must lie"), std::string::npos);
    EXPECT_NE(m.find("dt must lie"), std::string::npos);
    EXPECT_NE(m.find("n_paths"), std::string::npos);
}

TEST(Config, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3, 1e-300, 123456789.0, -2.5}) EXPECT_EQ(std::stod(format_double(v)), v);
}

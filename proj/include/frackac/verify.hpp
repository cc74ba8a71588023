#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace frackac {

struct Check {
    std::string id;
    int criterion = 0;  // 0: supplementary, not one of the numbered criteria
    double target = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    std::string relation;  // "abs_diff_le", "ge", "le", "in_band"
    bool pass = false;
    std::string note;
};

struct FitPoint {
    std::string id;
    double x = 0.0, y = 0.0;
};

struct VerifyReport {
    std::vector<Check> checks;
    std::vector<FitPoint> points;
    bool pass() const;
    bool criterion_pass(int n) const;  // false when the criterion produced no checks
};

struct VerifyOptions {
    bool quick = false;  // reduced sample sizes for smoke runs
    int workers = 1;
    std::uint64_t seed = 20240601;
    std::map<std::string, double> tolerances;  // defaults from default_tolerances()
};

constexpr int kCriteria = 10;  // reproducibility is checked by running the suite twice

void run_criterion(int n, const VerifyOptions& opt, VerifyReport& rep);
VerifyReport run_verify(const VerifyOptions& opt, const std::vector<int>& criteria = {});

std::string report_json(const VerifyReport& rep, const std::vector<std::pair<std::string, std::string>>& config_echo,
                        std::uint64_t seed);
std::string points_csv(const VerifyReport& rep);

}  // namespace frackac

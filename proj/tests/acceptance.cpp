// acceptance --criterion N [--quick] [--workers W]
// Prints every check of the criterion, then one PASS/FAIL line for it.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "frackac/config.hpp"
#include "frackac/verify.hpp"

using namespace frackac;

namespace {

void print_checks(const VerifyReport& rep) {
    for (const auto& c : rep.checks)
        std::printf("  %s %-40s observed=%.6g target=%.6g tol=%.3g %s%s%s\n", c.pass ? "ok  " : "FAIL", c.id.c_str(),
                    c.observed, c.target, c.tolerance, c.relation.c_str(), c.note.empty() ? "" : " | ",
                    c.note.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria runner"};
    int criterion = 0, workers = 1;
    bool quick = false;
    app.add_option("--criterion", criterion, "criterion 1-11")->required()->check(CLI::Range(1, 11));
    app.add_flag("--quick", quick, "reduced sample sizes");
    app.add_option("--workers", workers, "worker threads");
    CLI11_PARSE(app, argc, argv);

    VerifyOptions opt;
    opt.quick = quick;
    opt.workers = workers;
    opt.tolerances = default_tolerances();
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    if (criterion == 11) {
        // Full quick suite twice, different worker counts; reports must match byte for byte.
        VerifyOptions a = opt, b = opt;
        a.quick = b.quick = true;
        a.workers = 1;
        b.workers = 3;
        std::vector<std::pair<std::string, std::string>> echo{{"verify.quick", "true"}};
        std::string ra = report_json(run_verify(a), echo, a.seed);
        std::string rb = report_json(run_verify(b), echo, b.seed);
        pass = ra == rb;
        std::printf("  %s reports: %zu and %zu bytes, %s\n", pass ? "ok  " : "FAIL", ra.size(), rb.size(),
                    pass ? "identical" : "differ");
    } else {
        VerifyReport rep;
        run_criterion(criterion, opt, rep);
        print_checks(rep);
        pass = rep.criterion_pass(criterion);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s (%.1f s%s)\n", criterion, pass ? "PASS" : "FAIL", secs, quick ? ", quick" : "");
    return pass ? 0 : 1;
}

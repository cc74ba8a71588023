#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "frackac/fk_solver.hpp"
#include "frackac/kernels.hpp"
#include "frackac/spatial_kernels.hpp"

namespace frackac {

// Grammar, one statement per line:
//   line  := blank | '#' comment | key '=' value [ '#' comment ]
//   key   := ident ('.' ident)*        ident := [A-Za-z_][A-Za-z0-9_]*
//   value := anything up to '#', trimmed; lists are comma separated
// A key may appear once. Keys outside the known set are rejected.
struct Config {
    double h = 0.3;
    std::string kernel = "smooth";
    double kernel_c = 1.0;
    double kernel_k = 0.4;
    double kernel_ell = 1.0;
    double t_max = 1.0;
    double dt = 1.0 / 1024;
    std::vector<double> eps_ladder;
    std::size_t n_paths = 100000;
    std::size_t n_fields = 32;
    std::uint64_t seed = 20240601;
    std::map<std::string, double> tolerances;
    std::string output_dir = ".";

    std::string source = "<defaults>";

    SpatialKernel make_kernel() const;
    HurstParams hurst() const { return HurstParams(h); }
    double tol(const std::string& name) const;  // throws ConfigError for unknown names

    // Section keys (fk.*, holder.*, ...) read on demand with a default.
    bool has(const std::string& key) const { return extra_.count(key) > 0; }
    double get(const std::string& key, double dflt) const;
    std::size_t get_count(const std::string& key, std::size_t dflt) const;
    std::string get_str(const std::string& key, const std::string& dflt) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& dflt) const;
    InitialCondition initial_condition() const;  // from u0, u0.c / u0.a / u0.k

    // Every effective key = value in a stable order (set keys and defaults).
    std::vector<std::pair<std::string, std::string>> echo() const;

    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> extra_;
};

std::map<std::string, double> default_tolerances();
std::vector<double> default_eps_ladder();

Config parse_config(const std::string& text, const std::string& source = "<string>");
Config load_config(const std::string& path);

// Re-checks every gate; `solver` adds H > 1/2 - gamma/4. Messages name the
// inequality and the hypothesis it encodes; all violations are reported at once.
void validate_config(const Config& c, bool solver);

std::string format_double(double v);  // shortest round-trip form

}  // namespace frackac

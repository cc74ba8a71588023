#include "frackac/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "frackac/errors.hpp"

namespace frackac {

namespace {

const std::set<std::string> kSections{"fk", "field", "frac", "holder", "rate", "weak", "chaos", "table", "verify",
                                      "variance", "u0", "cross"};

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    bool start = true;
    for (char ch : k) {
        if (ch == '.') {
            if (start) return false;
            start = true;
            continue;
        }
        bool alpha = std::isalpha(static_cast<unsigned char>(ch)) || ch == '_';
        bool digit = std::isdigit(static_cast<unsigned char>(ch));
        if (start ? !alpha : !(alpha || digit)) return false;
        start = false;
    }
    return !start;
}

std::string where(const std::string& src, int line) { return src + ":" + std::to_string(line) + ": "; }

double to_double(const std::string& v, const std::string& ctx) {
    double out = 0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e || !std::isfinite(out)) throw ConfigError(ctx + "expected a number, got '" + v + "'");
    return out;
}

std::uint64_t to_u64(const std::string& v, const std::string& ctx) {
    std::uint64_t out = 0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    int base = 10;
    if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
        b += 2;
        base = 16;
    }
    auto [p, ec] = std::from_chars(b, e, out, base);
    if (ec != std::errc() || p != e) throw ConfigError(ctx + "expected a non-negative integer, got '" + v + "'");
    return out;
}

std::vector<double> to_list(const std::string& v, const std::string& ctx) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), ctx));
    if (out.empty()) throw ConfigError(ctx + "empty list");
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, p);
}

std::map<std::string, double> default_tolerances() {
    return {
        {"alpha_factor", 0.95},   {"closed_form", 1e-8},   {"cross_time_slope", 0.15},
        {"dctrl2_constant", 4.0}, {"f_bound", 64.0},        {"frac_power", 1e-6},
        {"g_large", 1.0},         {"g_small", 16.0},        {"holder_integral", 0.02},
        {"holder_solution", 0.2}, {"ibp", 1e-5},            {"inner_step", 1e-8},
        {"limit_slope", 0.15},    {"slope", 0.15},          {"stderr_factor", 3.0},
        {"zahle", 1e-4},
    };
}

std::vector<double> default_eps_ladder() {
    std::vector<double> v;
    for (int k = 4; k <= 12; ++k) v.push_back(std::ldexp(1.0, -k));
    return v;
}

SpatialKernel Config::make_kernel() const {
    try {
        if (kernel == "constant") return make_constant(kernel_c);
        if (kernel == "fbm_space") return make_fbm_space(kernel_k);
        if (kernel == "smooth") return make_smooth(kernel_ell);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("kernel must be one of constant, fbm_space, smooth (got '" + kernel + "')");
}

double Config::tol(const std::string& name) const {
    auto it = tolerances.find(name);
    if (it == tolerances.end()) throw ConfigError("unknown tolerance '" + name + "'");
    return it->second;
}

double Config::get(const std::string& key, double dflt) const {
    auto it = extra_.find(key);
    if (it == extra_.end()) return dflt;
    return to_double(it->second.value, where(source, it->second.line) + key + ": ");
}

std::size_t Config::get_count(const std::string& key, std::size_t dflt) const {
    auto it = extra_.find(key);
    if (it == extra_.end()) return dflt;
    return static_cast<std::size_t>(to_u64(it->second.value, where(source, it->second.line) + key + ": "));
}

std::string Config::get_str(const std::string& key, const std::string& dflt) const {
    auto it = extra_.find(key);
    return it == extra_.end() ? dflt : it->second.value;
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& dflt) const {
    auto it = extra_.find(key);
    if (it == extra_.end()) return dflt;
    return to_list(it->second.value, where(source, it->second.line) + key + ": ");
}

InitialCondition Config::initial_condition() const {
    std::string kind = get_str("u0", "constant");
    if (kind == "constant") return InitialCondition::constant(get("u0.c", 1.0));
    if (kind == "gaussian") return InitialCondition::gaussian(get("u0.a", 1.0));
    if (kind == "cosine") return InitialCondition::cosine(get("u0.k", 1.0));
    if (kind == "linear") return InitialCondition::linear();
    throw ConfigError("u0 must be one of constant, gaussian, cosine, linear (got '" + kind + "')");
}

std::vector<std::pair<std::string, std::string>> Config::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
        return s;
    };
    out.emplace_back("h", format_double(h));
    out.emplace_back("kernel", kernel);
    out.emplace_back("kernel.c", format_double(kernel_c));
    out.emplace_back("kernel.k", format_double(kernel_k));
    out.emplace_back("kernel.ell", format_double(kernel_ell));
    out.emplace_back("t_max", format_double(t_max));
    out.emplace_back("dt", format_double(dt));
    out.emplace_back("eps_ladder", list(eps_ladder));
    out.emplace_back("n_paths", std::to_string(n_paths));
    out.emplace_back("n_fields", std::to_string(n_fields));
    out.emplace_back("seed", std::to_string(seed));
    out.emplace_back("output_dir", output_dir);
    for (auto& [k, v] : tolerances) out.emplace_back("tolerances." + k, format_double(v));
    for (auto& [k, e] : extra_) out.emplace_back(k, e.value);
    return out;
}

Config parse_config(const std::string& text, const std::string& source) {
    Config c;
    c.source = source;
    c.eps_ladder = default_eps_ladder();
    c.tolerances = default_tolerances();
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        auto eq = s.find('=');
        std::string ctx = where(source, line);
        if (eq == std::string::npos) throw ConfigError(ctx + "expected 'key = value'");
        std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError(ctx + "malformed key '" + key + "'");
        if (val.empty()) throw ConfigError(ctx + "missing value for '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError(ctx + "duplicate key '" + key + "'");
        ctx += key + ": ";
        if (key == "h") c.h = to_double(val, ctx);
        else if (key == "kernel") c.kernel = val;
        else if (key == "kernel.c") c.kernel_c = to_double(val, ctx);
        else if (key == "kernel.k") c.kernel_k = to_double(val, ctx);
        else if (key == "kernel.ell") c.kernel_ell = to_double(val, ctx);
        else if (key == "t_max") c.t_max = to_double(val, ctx);
        else if (key == "dt") c.dt = to_double(val, ctx);
        else if (key == "eps_ladder") c.eps_ladder = to_list(val, ctx);
        else if (key == "n_paths") c.n_paths = static_cast<std::size_t>(to_u64(val, ctx));
        else if (key == "n_fields") c.n_fields = static_cast<std::size_t>(to_u64(val, ctx));
        else if (key == "seed") c.seed = to_u64(val, ctx);
        else if (key == "output_dir") c.output_dir = val;
        else if (key.rfind("tolerances.", 0) == 0) {
            std::string name = key.substr(11);
            if (!c.tolerances.count(name)) throw ConfigError(ctx + "unknown tolerance '" + name + "'");
            c.tolerances[name] = to_double(val, ctx);
        } else {
            std::string section = key.substr(0, key.find('.'));
            if (!kSections.count(section)) throw ConfigError(ctx + "unknown key");
            c.extra_[key] = {val, line};
        }
    }
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

void validate_config(const Config& c, bool solver) {
    std::vector<std::string> bad;
    if (!(c.h > 0 && c.h < 0.5)) bad.push_back("h must lie in (0, 1/2) (rough regime H < 1/2 of the temporal noise)");
    double gamma = 0;
    try {
        gamma = c.make_kernel().gamma;
    } catch (const ConfigError& e) {
        bad.push_back(std::string(e.what()) + " (kernel Hoelder condition Q2 needs a valid parameter)");
    }
    if (solver && gamma > 0 && c.h > 0 && c.h < 0.5 && !solver_gate(c.h, gamma)) {
        std::ostringstream m;
        m << "H > 1/2 - gamma/4 fails: " << format_double(c.h) << " <= " << format_double(0.5 - gamma / 4)
          << " (Feynman-Kac solvability hypothesis on H and the spatial Hoelder exponent)";
        bad.push_back(m.str());
    }
    if (!(c.t_max > 0)) bad.push_back("t_max must be > 0");
    if (!(c.dt > 0 && c.dt <= c.t_max)) bad.push_back("dt must lie in (0, t_max]");
    for (double e : c.eps_ladder)
        if (!(e > 0)) {
            bad.push_back("eps_ladder entries must be > 0 (mollification width)");
            break;
        }
    if (c.n_paths == 0) bad.push_back("n_paths must be >= 1");
    for (auto& [k, v] : c.tolerances)
        if (!(v > 0)) bad.push_back("tolerances." + k + " must be > 0");
    if (bad.empty()) return;
    std::string msg = c.source + ": invalid configuration";
    for (auto& b : bad) msg += "\n  " + b;
    if (bad.size() == 1 && bad[0].rfind("H > 1/2", 0) == 0) throw GateError(msg);
    throw ConfigError(msg);
}

}  // namespace frackac

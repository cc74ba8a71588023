#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <CLI11.hpp>
#include <json.hpp>

#include "frackac/analysis.hpp"
#include "frackac/config.hpp"
#include "frackac/errors.hpp"
#include "frackac/fk_solver.hpp"
#include "frackac/frac_calc.hpp"
#include "frackac/gaussian_field.hpp"
#include "frackac/kernels.hpp"
#include "frackac/stoch_integral.hpp"
#include "frackac/verify.hpp"

using namespace frackac;
using json = nlohmann::ordered_json;

namespace {

struct Flags {
    std::string config;
    std::string out;
    long long seed = -1;
    int workers = 0;
    bool force = false;
    bool quick = false;
    std::vector<int> criteria;
};

const std::vector<std::string> kSolverCommands{"fk-mean", "fk-second-moment", "wick-moments", "chaos-coeff",
                                               "weak-residual"};

std::string fmt(double v) { return format_double(v); }

class Output {
public:
    Output(const Config& c, std::string cmd) : dir_(c.output_dir), cmd_(std::move(cmd)) {
        std::filesystem::create_directories(dir_);
    }
    void csv(const std::string& name, const std::string& body) { write(name, body); }
    void summary(json j) {
        std::string s = j.dump(2) + "\n";
        write(cmd_ + ".json", s);
        std::cout << s;
    }

private:
    void write(const std::string& name, const std::string& body) {
        std::ofstream f(std::filesystem::path(dir_) / name, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + (std::filesystem::path(dir_) / name).string());
        f << body;
    }
    std::string dir_, cmd_;
};

json versions() {
    json v;
    v["frackac"] = FRACKAC_VERSION;
    v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
    v["boost"] = BOOST_LIB_VERSION;
    v["compiler"] = __VERSION__;
    return v;
}

json envelope(const std::string& cmd, const Config& c) {
    json j;
    j["command"] = cmd;
    j["version"] = FRACKAC_VERSION;
    j["seed"] = c.seed;
    j["versions"] = versions();
    json e = json::object();
    for (auto& [k, v] : c.echo()) e[k] = v;
    j["config_echo"] = e;
    return j;
}

json mc_json(const MCEstimate& m) {
    json j;
    j["estimate"] = m.mean;
    j["stderr"] = m.std_error;
    j["n"] = m.n;
    j["rejected"] = m.rejected;
    return j;
}

json fit_json(const RateFit& f) {
    json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r_squared"] = f.r_squared;
    return j;
}

HolderPath config_path(const Config& c, const std::string& prefix, double t) {
    std::string kind = c.get_str(prefix + ".path", "linear");
    double a = c.get(prefix + ".path_a", 1.0), b = c.get(prefix + ".path_b", 0.0);
    std::size_t n = c.get_count(prefix + ".path_nodes", 64);
    if (kind == "linear") return HolderPath::sample([&](double s) { return b + a * s; }, t, 1).with_alpha(1.0);
    if (kind == "constant") return HolderPath::sample([&](double) { return b; }, t, 1).with_alpha(1.0);
    if (kind == "sine") return HolderPath::sample([&](double s) { return b + std::sin(a * s); }, t, n).with_alpha(1.0);
    if (kind == "brownian") {
        BrownianPath bp = brownian_path(RngSeed{c.seed, 0}.child(7), t, t / static_cast<double>(n), 1);
        return bp.path;
    }
    throw ConfigError(prefix + ".path must be linear, constant, sine or brownian");
}

std::vector<double> point_of(const Config& c, const std::string& key, int dim) {
    auto v = c.get_list(key, std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    if (static_cast<int>(v.size()) != dim) throw ConfigError(key + " must have " + std::to_string(dim) + " entries");
    return v;
}

FkOptions fk_options(const Config& c, const Flags& f) {
    FkOptions o;
    o.dt = c.get("fk.dt", c.dt);
    o.workers = f.workers;
    return o;
}

// ---- subcommands ----

void cmd_simulate_field(const Config& c, const Flags&, Output& out) {
    double eps = c.get("field.eps", 0.0);
    auto g = GridSpec::covering(c.t_max, eps, c.dt, c.get("field.x0", -1.0), c.get("field.x1", 1.0),
                                c.get_count("field.n_sites", 65), c.hurst(), c.make_kernel());
    FieldSample fs = simulate_field(g, RngSeed{c.seed, 0});
    std::string s = "t,x,value\n";
    for (std::size_t i = 0; i < g.times.size(); ++i)
        for (std::size_t j = 0; j < g.sites.size(); ++j)
            s += fmt(g.times[i]) + "," + fmt(g.sites[j]) + "," + fmt(fs.values(static_cast<Eigen::Index>(i),
                                                                                static_cast<Eigen::Index>(j))) + "\n";
    out.csv("simulate-field.csv", s);
    json j = envelope("simulate-field", c);
    json spec;
    spec["n_times"] = g.times.size();
    spec["t_first"] = g.times.front();
    spec["t_last"] = g.times.back();
    spec["dt"] = c.dt;
    spec["n_sites"] = g.sites.size();
    spec["x_first"] = g.sites.front();
    spec["x_last"] = g.sites.back();
    spec["h"] = c.h;
    spec["kernel"] = g.kernel.name();
    j["spec"] = spec;
    out.summary(j);
}

void cmd_kernel_table(const Config& c, const Flags&, Output& out) {
    std::string kind = c.get_str("table.kind", "v");
    auto rs = c.get_list("table.r", {0.01, 0.1, 0.5, 1.0, 2.0});
    auto es = c.get_list("table.eps", {0.0625, 0.015625});
    auto ds = c.get_list("table.delta", {0.0625, 0.015625});
    double beta = c.get("table.beta", 2 * c.h);
    HurstParams h = c.hurst();
    std::string s = "r,eps,delta,value\n";
    for (double r : rs)
        for (double e : es) {
            if (kind == "v") {
                for (double d : ds) s += fmt(r) + "," + fmt(e) + "," + fmt(d) + "," + fmt(v_kernel(r, e, d, h)) + "\n";
            } else if (kind == "f") {
                s += fmt(r) + "," + fmt(e) + "," + fmt(e) + "," + fmt(f_eps(r, e, beta)) + "\n";
            } else if (kind == "g") {
                s += fmt(r) + "," + fmt(e) + "," + fmt(e) + "," + fmt(g_eps(r, e, h)) + "\n";
            } else {
                throw ConfigError("table.kind must be v, f or g");
            }
        }
    out.csv("kernel-table.csv", s);
    json j = envelope("kernel-table", c);
    j["kind"] = kind;
    j["rows"] = std::count(s.begin(), s.end(), '\n') - 1;
    out.summary(j);
}

void cmd_fracderiv(const Config& c, const Flags&, Output& out) {
    std::string fn = c.get_str("frac.function", "power");
    double lam = c.get("frac.lambda", 2.0), a = c.get("frac.a", 0.0), b = c.get("frac.b", 1.0);
    double alpha = c.get("frac.alpha", 0.5);
    std::size_t n = c.get_count("frac.n", 1024), pts = c.get_count("frac.points", 16);
    std::string side_s = c.get_str("frac.side", "left");
    if (side_s != "left" && side_s != "right") throw ConfigError("frac.side must be left or right");
    Side side = side_s == "left" ? Side::Left : Side::Right;
    std::function<double(double)> f;
    double exponent = 1.0;
    if (fn == "power") {
        f = [=](double y) { return lam == 0.0 ? 1.0 : std::pow(y - a, lam); };
        exponent = lam == 0.0 ? 1.0 : std::min(1.0, lam);
    } else if (fn == "sin") {
        f = [](double y) { return std::sin(y); };
    } else if (fn == "exp") {
        f = [](double y) { return std::exp(y); };
    } else {
        throw ConfigError("frac.function must be power, sin or exp");
    }
    auto sf = SampledFunction::sample(f, a, b, n).with_exponent(exponent);
    std::string op = c.get_str("frac.op", "derivative");
    std::string s = "x,value\n";
    for (std::size_t i = 1; i <= pts; ++i) {
        double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(pts + 1);
        double v = op == "integral" ? frac_integral(sf, alpha, side, x) : frac_deriv(sf, alpha, side, x);
        s += fmt(x) + "," + fmt(v) + "\n";
    }
    out.csv("fracderiv.csv", s);
    json j = envelope("fracderiv", c);
    j["op"] = op;
    j["points"] = pts;
    out.summary(j);
}

void cmd_integral_variance(const Config& c, const Flags& f, Output& out) {
    double t = c.get("variance.t", c.t_max);
    HurstParams h = c.hurst();
    SpatialKernel q = c.make_kernel();
    HolderPath phi = config_path(c, "variance", t);
    double v = variance_closed(phi, t, h, q);
    json lad = json::array();
    std::vector<std::pair<double, double>> pts;
    std::string s = "eps,cross_moment,abs_error\n";
    for (double e : c.eps_ladder) {
        double cm = cross_moment(phi, t, e, e, h, q);
        json r;
        r["eps"] = e;
        r["cross_moment"] = cm;
        lad.push_back(r);
        pts.emplace_back(e, std::abs(cm - v));
        s += fmt(e) + "," + fmt(cm) + "," + fmt(std::abs(cm - v)) + "\n";
    }
    json j = envelope("integral-variance", c);
    j["closed_form"] = v;
    // MC at one eps with pathwise field functionals
    double eps = c.get("variance.mc_eps", c.eps_ladder.front());
    std::size_t draws = c.n_fields;
    double dt = std::min(c.dt, eps / 4);
    auto n_t = static_cast<long>(std::ceil(t / dt - 1e-9));
    dt = t / static_cast<double>(n_t);
    auto pad = static_cast<long>(std::ceil(eps / dt - 1e-9));
    double lo = phi.sup_norm(), x1 = 0, x0 = 0;
    for (double g : phi.grid()) {
        x0 = std::min(x0, phi.value(g));
        x1 = std::max(x1, phi.value(g));
    }
    (void)lo;
    if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
    GridSpec g = GridSpec::uniform(dt, -pad, n_t + pad, x0, x1, c.get_count("variance.n_sites", 65), h, q);
    FieldSimulator sim(g);
    FunctionalSampler fs(sim, {integral_eps_functional(g, phi, t, eps)});
    std::vector<double> sq(draws);
    RngSeed base{c.seed, 0};
    parallel_for(draws, f.workers, [&](std::size_t i) {
        double x = fs.pathwise(base.child(i))[0];
        sq[i] = x * x;
    });
    MCEstimate mc = summarize(sq, base);
    j["mc_estimate"] = mc.mean;
    j["mc_stderr"] = mc.std_error;
    j["mc_eps"] = eps;
    j["mc_draws"] = mc.n;
    j["eps_ladder"] = lad;
    json rf = json::object();
    if (q.kind == KernelKind::Constant) {
        rf["degenerate"] = true;
    } else {
        RateFit fit = rate_fit(pts);
        rf = fit_json(fit);
        rf["target"] = 2 * h.h + q.gamma * c.tol("alpha_factor") * std::min(1.0, phi.alpha_est()) - 1;
    }
    j["rate_fit"] = rf;
    out.csv("integral-variance.csv", s);
    out.summary(j);
}

void cmd_fk(const std::string& cmd, const Config& c, const Flags& f, Output& out) {
    double t = c.get("fk.t", c.t_max);
    int d = static_cast<int>(c.get_count("fk.d", 1));
    SpatialKernel q = c.make_kernel();
    if (d != 1) {
        if (c.kernel == "constant") q = make_constant(c.kernel_c, d);
        else if (c.kernel == "fbm_space") q = make_fbm_space(c.kernel_k, d);
        else q = make_smooth(c.kernel_ell, d);
    }
    auto x = point_of(c, "fk.x", d);
    auto y = point_of(c, "fk.y", d);
    auto u0 = c.initial_condition();
    HurstParams h = c.hurst();
    RngSeed seed{c.seed, 0};
    FkOptions o = fk_options(c, f);
    json j = envelope(cmd, c);
    if (cmd == "fk-mean") {
        j.update(mc_json(u_mean(t, x, u0, c.n_paths, h, q, seed, o)));
    } else if (cmd == "fk-second-moment") {
        j.update(mc_json(u_second_moment(t, x, y, u0, c.n_paths, h, q, seed, o)));
    } else if (cmd == "wick-moments") {
        auto w = wick_moments(t, x, y, u0, c.n_paths, h, q, seed, o, true);
        j.update(mc_json(w.mean_x));
        j["heat_semigroup"] = heat_semigroup(u0, t, x);
        j["second_moment"] = mc_json(w.second_moment_xy);
    } else {
        std::size_t n = c.get_count("chaos.n", 1);
        auto r = c.get_list("chaos.r", std::vector<double>(n, t / 2));
        auto z = c.get_list("chaos.z", std::vector<double>(n * static_cast<std::size_t>(d), 0.5));
        if (r.size() != n || z.size() != n * static_cast<std::size_t>(d))
            throw ConfigError("chaos.r needs n entries and chaos.z needs n*d entries");
        std::vector<ChaosPoint> pts;
        for (std::size_t i = 0; i < n; ++i)
            pts.push_back({r[i], std::vector<double>(z.begin() + static_cast<long>(i) * d,
                                                     z.begin() + static_cast<long>(i + 1) * d)});
        j.update(mc_json(chaos_coeff(n, t, x, pts, u0, c.n_paths, h, q, seed, o)));
    }
    std::string s = "quantity,estimate,stderr,n,rejected\n";
    auto row = [&](const std::string& name, const json& m) {
        s += name + "," + fmt(m["estimate"].get<double>()) + "," + fmt(m["stderr"].get<double>()) + "," +
             std::to_string(m["n"].get<std::size_t>()) + "," + std::to_string(m["rejected"].get<std::size_t>()) + "\n";
    };
    row(cmd == "wick-moments" ? "mean" : cmd, j);
    if (j.contains("second_moment")) row("second_moment", j["second_moment"]);
    out.csv(cmd + ".csv", s);
    out.summary(j);
}

void cmd_holder(const Config& c, const Flags& f, Output& out) {
    std::string target = c.get_str("holder.target", "integral");
    HurstParams h = c.hurst();
    SpatialKernel q = c.make_kernel();
    HolderResult r;
    if (target == "integral") {
        double s = c.get("holder.s", 0.25);
        auto lags = c.get_list("holder.lags", {0.125, 0.0625, 0.03125, 0.015625, 0.0078125});
        double tmax = s;
        for (double l : lags) tmax = std::max(tmax, s + l);
        HolderPath phi = config_path(c, "holder", tmax);
        r = holder_integral(phi, s, lags, c.get("holder.eps", std::ldexp(1.0, -12)), h, q,
                            c.tol("holder_integral"));
    } else if (target == "solution") {
        HolderSolutionParams p;
        p.s = c.get("holder.s", p.s);
        p.lags = c.get_list("holder.lags", p.lags);
        p.x = c.get("holder.x", p.x);
        p.eps = c.get("holder.eps", p.eps);
        p.dt = c.get("holder.dt", p.dt);
        p.n_pairs = c.get_count("holder.n_pairs", p.n_pairs);
        p.tol = c.tol("holder_solution");
        p.workers = f.workers;
        r = holder_solution(c.initial_condition(), h, q, p, RngSeed{c.seed, 0});
    } else {
        throw ConfigError("holder.target must be integral or solution");
    }
    std::string s = "lag,moment,stderr\n";
    for (std::size_t i = 0; i < r.lags.size(); ++i)
        s += fmt(r.lags[i]) + "," + fmt(r.moments[i]) + "," + fmt(r.errors[i]) + "\n";
    out.csv("holder.csv", s);
    json j = envelope("holder", c);
    j["target"] = target;
    j["rate_fit"] = fit_json(r.fit);
    j["target_slope"] = r.target;
    j["threshold"] = r.threshold;
    j["degenerate"] = r.degenerate;
    j["pass"] = r.pass;
    j["note"] = r.note;
    out.summary(j);
}

void cmd_rate(const Config& c, const Flags&, Output& out) {
    double t = c.get("rate.t", c.t_max);
    HolderPath phi = config_path(c, "rate", t);
    auto r = convergence_experiment(phi, t, c.hurst(), c.make_kernel(), c.eps_ladder, c.tol("alpha_factor"),
                                    c.tol("slope"));
    std::string s = "eps,abs_error\n";
    for (std::size_t i = 0; i < r.eps.size(); ++i) s += fmt(r.eps[i]) + "," + fmt(r.errors[i]) + "\n";
    out.csv("rate.csv", s);
    json j = envelope("rate", c);
    j["rate_fit"] = r.degenerate ? json::object() : fit_json(r.fit);
    j["target_slope"] = r.target;
    j["threshold"] = r.threshold;
    j["degenerate"] = r.degenerate;
    j["pass"] = r.pass;
    out.summary(j);
}

void cmd_weak_residual(const Config& c, const Flags& f, Output& out) {
    double t = c.get("weak.t", 0.25);
    double eps = c.get("weak.eps", std::ldexp(1.0, -6));
    double x0 = c.get("weak.x0", -4.0), x1 = c.get("weak.x1", 4.0);
    auto g = GridSpec::covering(t, eps, c.dt, x0, x1, c.get_count("weak.n_sites", 257), c.hurst(), c.make_kernel());
    FieldSample fs = simulate_field(g, RngSeed{c.seed, 0}.child(1));
    double center = c.get("weak.center", 0.0), radius = c.get("weak.radius", 1.0);
    std::size_t nx = c.get_count("weak.nx", 64);
    std::vector<double> xg;
    for (std::size_t j = 0; j <= nx; ++j)
        xg.push_back(center - radius + 2 * radius * static_cast<double>(j) / static_cast<double>(nx));
    auto w = weak_residual(fs, c.initial_condition(), TestFunction::bump(center, radius), t, eps, c.n_paths, xg,
                           RngSeed{c.seed, 0}.child(2), f.workers);
    json j = envelope("weak-residual", c);
    j["lhs"] = w.lhs;
    j["rhs"] = w.rhs;
    j["residual"] = w.residual;
    j["mc_error"] = w.mc_error;
    j["quad_error"] = w.quad_error;
    j["error_bar"] = w.error_bar();
    j["n_paths"] = w.n_paths;
    j["steps"] = w.steps;
    out.summary(j);
}

int cmd_verify(const Config& c, const Flags& f) {
    VerifyOptions o;
    o.quick = f.quick || c.get_str("verify.quick", "false") == "true";
    o.workers = f.workers;
    o.seed = c.seed;
    o.tolerances = c.tolerances;
    auto crit = f.criteria;
    if (crit.empty() && c.has("verify.criteria"))
        for (double v : c.get_list("verify.criteria", {})) crit.push_back(static_cast<int>(v));
    VerifyReport rep = run_verify(o, crit);
    std::filesystem::create_directories(c.output_dir);
    auto echo = c.echo();
    std::string js = report_json(rep, echo, c.seed);
    std::ofstream(std::filesystem::path(c.output_dir) / "verify.json", std::ios::binary) << js;
    std::ofstream(std::filesystem::path(c.output_dir) / "verify_points.csv", std::ios::binary) << points_csv(rep);
    for (const auto& ch : rep.checks)
        std::cout << (ch.pass ? "PASS " : "FAIL ") << ch.id << " observed=" << fmt(ch.observed)
                  << " target=" << fmt(ch.target) << " tol=" << fmt(ch.tolerance) << "\n";
    std::cout << (rep.pass() ? "verify: all checks passed\n" : "verify: some checks failed\n");
    return rep.pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frackac: fractional noise Feynman-Kac experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    f.workers = default_workers();
    app.add_option("-c,--config", f.config, "config file (key = value lines)");
    app.add_option("-o,--out", f.out, "output directory (overrides output_dir)");
    app.add_option("--seed", f.seed, "master seed (overrides seed)");
    app.add_option("--workers", f.workers, "worker threads (default FRACKAC_WORKERS or 1)");
    app.add_flag("--force", f.force, "downgrade config gate violations to warnings");
    const std::vector<std::pair<std::string, std::string>> cmds{
        {"simulate-field", "simulate a noise field on a grid (CSV t,x,value)"},
        {"kernel-table", "tabulate V, f_eps or g_eps (CSV r,eps,delta,value)"},
        {"fracderiv", "fractional derivative or integral on a grid (CSV x,value)"},
        {"integral-variance", "closed-form variance, eps ladder and MC of the mollified integral"},
        {"fk-mean", "MC mean of the Feynman-Kac solution"},
        {"fk-second-moment", "MC second moment E u(t,x) u(t,y)"},
        {"wick-moments", "Wick solution mean and second moment"},
        {"chaos-coeff", "chaos coefficient h_n"},
        {"holder", "Hoelder slope experiment (integral or solution)"},
        {"rate", "convergence rate of the mollified second moment"},
        {"weak-residual", "weak-form residual for one field draw"},
        {"verify", "run the acceptance suite; exit 3 on failure"}};
    std::vector<CLI::App*> subs;
    for (auto& [name, desc] : cmds) subs.push_back(app.add_subcommand(name, desc));
    CLI::App* verify = subs.back();
    verify->add_flag("--quick", f.quick, "reduced sample sizes");
    verify->add_option("--criteria", f.criteria, "subset of criteria (1-10)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        for (int i = 1; i < argc; ++i) {
            std::string a = argv[i];
            if (a == "-c" || a == "--config" || a == "-o" || a == "--out" || a == "--seed" || a == "--workers") {
                ++i;
                continue;
            }
            if (a.empty() || a[0] == '-') continue;
            if (!app.get_subcommand_no_throw(a)) {
                std::cerr << "error: unknown subcommand '" << a << "'\n\n" << app.help();
                return 2;
            }
            break;
        }
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    std::string cmd = app.get_subcommands().front()->get_name();
    try {
        Config c = f.config.empty() ? parse_config("", "<defaults>") : load_config(f.config);
        if (f.seed >= 0) c.seed = static_cast<std::uint64_t>(f.seed);
        if (!f.out.empty()) c.output_dir = f.out;
        if (f.workers < 1) throw ConfigError("--workers must be >= 1");
        bool solver = std::find(kSolverCommands.begin(), kSolverCommands.end(), cmd) != kSolverCommands.end();
        try {
            validate_config(c, solver);
        } catch (const std::exception& e) {
            if (!f.force) throw;
            std::cerr << "warning (--force): " << e.what() << "\n";
        }
        if (cmd == "verify") return cmd_verify(c, f);
        Output out(c, cmd);
        if (cmd == "simulate-field") cmd_simulate_field(c, f, out);
        else if (cmd == "kernel-table") cmd_kernel_table(c, f, out);
        else if (cmd == "fracderiv") cmd_fracderiv(c, f, out);
        else if (cmd == "integral-variance") cmd_integral_variance(c, f, out);
        else if (cmd == "holder") cmd_holder(c, f, out);
        else if (cmd == "rate") cmd_rate(c, f, out);
        else if (cmd == "weak-residual") cmd_weak_residual(c, f, out);
        else cmd_fk(cmd, c, f, out);
        return 0;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 1;
    } catch (const GateError& e) {
        std::cerr << "gate violation: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CoverageError& e) {
        std::cerr << "coverage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#include "frackac/gaussian_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "frackac/errors.hpp"
#include "frackac/parallel.hpp"

namespace frackac {

namespace {

void check_axis(const std::vector<double>& v, const char* name, std::size_t cap) {
    if (v.size() < 2) throw ConfigError(std::string("GridSpec: need at least 2 ") + name);
    if (v.size() > cap) {
        std::ostringstream os;
        os << "GridSpec: " << v.size() << " " << name << " exceeds the limit of " << cap;
        throw ConfigError(os.str());
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw ConfigError(std::string("GridSpec: non-finite ") + name);
        if (i > 0 && !(v[i] > v[i - 1])) throw ConfigError(std::string("GridSpec: ") + name + " must be strictly increasing");
    }
}

// index i and weight w with x = (1-w) v[i] + w v[i+1]
void locate(const std::vector<double>& v, double x, const char* coord, std::size_t& i, double& w) {
    double tol = 1e-12 * std::max(1.0, v.back() - v.front());
    if (!(x >= v.front() - tol && x <= v.back() + tol)) {
        std::ostringstream os;
        os << "field grid does not cover " << coord << " = " << x << " (range [" << v.front() << ", " << v.back()
           << "])";
        throw CoverageError(os.str());
    }
    auto it = std::upper_bound(v.begin(), v.end(), x);
    i = it == v.begin() ? 0 : static_cast<std::size_t>(it - v.begin()) - 1;
    if (i >= v.size() - 1) i = v.size() - 2;
    w = std::clamp((x - v[i]) / (v[i + 1] - v[i]), 0.0, 1.0);
    // grid-aligned queries use the node value exactly
    if (w < 1e-9) w = 0.0;
    if (w > 1.0 - 1e-9) w = 1.0;
}

}  // namespace

void GridSpec::validate() const {
    check_axis(times, "times", kMaxTimes);
    check_axis(sites, "sites", kMaxSites);
    if (kernel.dim != 1) throw ConfigError("GridSpec: grid simulation supports d = 1 only");
}

GridSpec GridSpec::uniform(double dt, long k0, long k1, double x0, double x1, std::size_t n_sites, HurstParams h,
                           SpatialKernel kernel) {
    if (!(dt > 0) || k1 <= k0) throw ConfigError("GridSpec::uniform: need dt > 0 and k1 > k0");
    if (n_sites < 2 || !(x1 > x0)) throw ConfigError("GridSpec::uniform: need >= 2 sites and x1 > x0");
    GridSpec g;
    g.h = h;
    g.kernel = std::move(kernel);
    for (long k = k0; k <= k1; ++k) g.times.push_back(static_cast<double>(k) * dt);
    for (std::size_t j = 0; j < n_sites; ++j)
        g.sites.push_back(j + 1 == n_sites ? x1 : x0 + (x1 - x0) * static_cast<double>(j) / (n_sites - 1));
    g.validate();
    return g;
}

GridSpec GridSpec::covering(double t_max, double eps_max, double dt, double x0, double x1, std::size_t n_sites,
                            HurstParams h, SpatialKernel kernel) {
    if (!(dt > 0)) throw ConfigError("GridSpec::covering: need dt > 0");
    long k0 = -static_cast<long>(std::ceil(eps_max / dt - 1e-9));
    long k1 = static_cast<long>(std::ceil((t_max + eps_max) / dt - 1e-9));
    return uniform(dt, k0, k1, x0, x1, n_sites, h, std::move(kernel));
}

double FieldSample::operator()(double t, double x) const {
    std::size_t i, j;
    double wt, wx;
    locate(spec->times, t, "t", i, wt);
    locate(spec->sites, x, "x", j, wx);
    double v = 0.0;
    if (wt < 1.0) {
        if (wx < 1.0) v += (1 - wt) * (1 - wx) * values(i, j);
        if (wx > 0.0) v += (1 - wt) * wx * values(i, j + 1);
    }
    if (wt > 0.0) {
        if (wx < 1.0) v += wt * (1 - wx) * values(i + 1, j);
        if (wx > 0.0) v += wt * wx * values(i + 1, j + 1);
    }
    return v;
}

void LinearFunctional::add_point(const GridSpec& g, double t, double x, double w) {
    std::size_t i, j;
    double wt, wx;
    locate(g.times, t, "t", i, wt);
    locate(g.sites, x, "x", j, wx);
    if (wt < 1.0) {
        if (wx < 1.0) terms.push_back({i, j, w * (1 - wt) * (1 - wx)});
        if (wx > 0.0) terms.push_back({i, j + 1, w * (1 - wt) * wx});
    }
    if (wt > 0.0) {
        if (wx < 1.0) terms.push_back({i + 1, j, w * wt * (1 - wx)});
        if (wx > 0.0) terms.push_back({i + 1, j + 1, w * wt * wx});
    }
}

double LinearFunctional::apply(const Eigen::MatrixXd& values) const {
    std::vector<double> parts;
    parts.reserve(terms.size());
    for (const Term& t : terms) parts.push_back(t.w * values(static_cast<Eigen::Index>(t.i), static_cast<Eigen::Index>(t.j)));
    return pairwise_sum(parts);
}

std::vector<double> trapezoid_nodes(const GridSpec& g, double t) {
    if (!(t >= 0)) throw std::invalid_argument("trapezoid_nodes: need t >= 0");
    if (t == 0) return {0.0};
    double step = g.times[1] - g.times[0];
    for (std::size_t i = 2; i < g.times.size(); ++i) step = std::min(step, g.times[i] - g.times[i - 1]);
    auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(t / step - 1e-9)));
    std::vector<double> s(n + 1);
    for (std::size_t k = 0; k <= n; ++k) s[k] = k == n ? t : t * static_cast<double>(k) / n;
    return s;
}

namespace {

void add_wdot(LinearFunctional& L, const GridSpec& g, double s, double x, double eps, double w) {
    L.add_point(g, s + eps, x, w / (2 * eps));
    L.add_point(g, s - eps, x, -w / (2 * eps));
}

double trap_weight(std::size_t k, std::size_t n, double h) { return (k == 0 || k == n) ? 0.5 * h : h; }

}  // namespace

LinearFunctional wdot_functional(const GridSpec& g, double s, double x, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("wdot: need eps > 0");
    LinearFunctional L;
    add_wdot(L, g, s, x, eps, 1.0);
    return L;
}

LinearFunctional mollified_w_functional(const GridSpec& g, double t, double x, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("mollified_w: need eps > 0");
    LinearFunctional L;
    auto s = trapezoid_nodes(g, t);
    std::size_t n = s.size() - 1;
    if (n == 0) return L;
    double h = t / n;
    for (std::size_t k = 0; k <= n; ++k) add_wdot(L, g, s[k], x, eps, trap_weight(k, n, h));
    return L;
}

LinearFunctional integral_eps_functional(const GridSpec& g, const HolderPath& phi, double t, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("integral_eps: need eps > 0");
    if (phi.dim() != 1) throw ConfigError("integral_eps: grid simulation supports d = 1 paths only");
    if (t > phi.horizon() + 1e-12) throw CoverageError("integral_eps: t exceeds the path horizon");
    LinearFunctional L;
    auto s = trapezoid_nodes(g, t);
    std::size_t n = s.size() - 1;
    if (n == 0) return L;
    double h = t / n;
    for (std::size_t k = 0; k <= n; ++k) add_wdot(L, g, s[k], phi.value(s[k]), eps, trap_weight(k, n, h));
    return L;
}

Eigen::MatrixXd gram_factor(const Eigen::MatrixXd& gram, const char* axis) {
    const Eigen::Index n = gram.rows();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i)
        if (gram(i, i) > 0.0) keep.push_back(i);
        else if (gram(i, i) < 0.0)
            throw NumericalError(std::string(axis) + " Gram matrix has a negative diagonal entry", 0.0, 0.0);
    const auto r = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, r);
    if (r == 0) return F;
    Eigen::MatrixXd G(r, r);
    for (Eigen::Index a = 0; a < r; ++a)
        for (Eigen::Index b = 0; b < r; ++b) G(a, b) = gram(keep[a], keep[b]);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) {
        double jitter = 1e-12 * G.trace();
        G.diagonal().array() += jitter;
        llt.compute(G);
        if (llt.info() != Eigen::Success)
            throw NumericalError(std::string(axis) + " Gram matrix is not positive semidefinite after jitter", 0.0,
                                 jitter);
    }
    Eigen::MatrixXd L = llt.matrixL();
    for (Eigen::Index a = 0; a < r; ++a) F.row(keep[a]) = L.row(a);
    return F;
}

Eigen::MatrixXd temporal_gram(const std::vector<double>& times, HurstParams h) {
    const auto n = static_cast<Eigen::Index>(times.size());
    double b = 2.0 * h.h;
    std::vector<double> p(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) p[i] = std::pow(std::abs(times[i]), b);
    Eigen::MatrixXd G(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        G(i, i) = p[i];
        for (Eigen::Index j = 0; j < i; ++j) {
            double v = 0.5 * (p[i] + p[j] - std::pow(std::abs(times[i] - times[j]), b));
            G(i, j) = v;
            G(j, i) = v;
        }
    }
    return G;
}

Eigen::MatrixXd spatial_gram(const std::vector<double>& sites, const SpatialKernel& q) {
    const auto n = static_cast<Eigen::Index>(sites.size());
    Eigen::MatrixXd G(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            double v = q.eval1(sites[i], sites[j]);
            G(i, j) = v;
            G(j, i) = v;
        }
    return G;
}

FieldSimulator::FieldSimulator(GridSpec spec) {
    spec.validate();
    spec_ = std::make_shared<const GridSpec>(std::move(spec));
    ft_ = gram_factor(temporal_gram(spec_->times, spec_->h), "temporal");
    if (spec_->kernel.kind == KernelKind::Constant) {
        // rank one; a jittered Cholesky would add site-independent noise
        double c = spec_->kernel.param;
        fx_ = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(spec_->sites.size()), c > 0 ? 1 : 0, std::sqrt(c));
    } else {
        fx_ = gram_factor(spatial_gram(spec_->sites, spec_->kernel), "spatial");
    }
}

namespace {

Eigen::MatrixXd draw_z(RngSeed seed, Eigen::Index rows, Eigen::Index cols) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> Z(rows, cols);
    NormalStream ns(seed);
    ns.fill({Z.data(), static_cast<std::size_t>(Z.size())});
    return Z;
}

}  // namespace

FieldSample FieldSimulator::sample(RngSeed seed) const {
    Eigen::MatrixXd Z = draw_z(seed, ft_.cols(), fx_.cols());
    FieldSample out;
    out.spec = spec_;
    out.seed = seed;
    out.values = (ft_ * Z) * fx_.transpose();
    return out;
}

Eigen::MatrixXd FieldSimulator::project(const LinearFunctional& L) const {
    // A F_x, touching only the rows of A that carry terms
    std::vector<Eigen::Index> rows;
    for (const auto& t : L.terms) rows.push_back(static_cast<Eigen::Index>(t.i));
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    Eigen::MatrixXd AF = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), fx_.cols());
    Eigen::MatrixXd FtSub(static_cast<Eigen::Index>(rows.size()), ft_.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) FtSub.row(static_cast<Eigen::Index>(k)) = ft_.row(rows[k]);
    for (const auto& t : L.terms) {
        auto k = std::lower_bound(rows.begin(), rows.end(), static_cast<Eigen::Index>(t.i)) - rows.begin();
        AF.row(k) += t.w * fx_.row(static_cast<Eigen::Index>(t.j));
    }
    return FtSub.transpose() * AF;
}

FieldSample simulate_field(const GridSpec& spec, RngSeed seed) { return FieldSimulator(spec).sample(seed); }

FunctionalSampler::FunctionalSampler(const FieldSimulator& sim, std::vector<LinearFunctional> fns) {
    for (const auto& L : fns) proj_.push_back(sim.project(L));
    const auto k = static_cast<Eigen::Index>(proj_.size());
    cov_.resize(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b <= a; ++b) {
            double v = (proj_[a].array() * proj_[b].array()).sum();
            cov_(a, b) = v;
            cov_(b, a) = v;
        }
    chol_ = gram_factor(cov_, "functional");
}

std::vector<double> FunctionalSampler::pathwise(RngSeed seed) const {
    std::vector<double> out;
    if (proj_.empty()) return out;
    Eigen::MatrixXd Z = draw_z(seed, proj_[0].rows(), proj_[0].cols());
    for (const auto& B : proj_) out.push_back((B.array() * Z.array()).sum());
    return out;
}

std::vector<double> FunctionalSampler::draw(RngSeed seed) const {
    Eigen::VectorXd z(chol_.cols());
    NormalStream ns(seed);
    ns.fill({z.data(), static_cast<std::size_t>(z.size())});
    Eigen::VectorXd v = chol_ * z;
    return {v.data(), v.data() + v.size()};
}

double wdot_eps(const FieldSample& field, double s, double x, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("wdot_eps: need eps > 0");
    return (field(s + eps, x) - field(s - eps, x)) / (2 * eps);
}

double mollified_w(const FieldSample& field, double t, double x, double eps) {
    return mollified_w_functional(*field.spec, t, x, eps).apply(field.values);
}

}  // namespace frackac

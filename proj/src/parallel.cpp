#include "frackac/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace frackac {

int default_workers() {
    if (const char* env = std::getenv("FRACKAC_WORKERS")) {
        try {
            int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t w = static_cast<std::size_t>(std::max(1, workers));
    w = std::min(w, n);
    if (w == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::size_t> failed_at(w, n);
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
        std::size_t lo = n * k / w, hi = n * (k + 1) / w;
        pool.emplace_back([&, k, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    errors[k] = std::current_exception();
                    failed_at[k] = i;
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (std::size_t k = 0; k < w; ++k)
        if (errors[k]) std::rethrow_exception(errors[k]);
}

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 16) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MCEstimate summarize(std::span<const double> samples, RngSeed seed) {
    std::vector<double> ok;
    ok.reserve(samples.size());
    for (double s : samples)
        if (std::isfinite(s)) ok.push_back(s);
    MCEstimate est;
    est.seed = seed;
    est.n = ok.size();
    est.rejected = samples.size() - ok.size();
    if (ok.size() < 2) throw std::invalid_argument("summarize: need at least 2 accepted samples");
    double n = static_cast<double>(ok.size());
    est.mean = pairwise_sum(ok) / n;
    std::vector<double> dev(ok.size());
    for (std::size_t i = 0; i < ok.size(); ++i) dev[i] = (ok[i] - est.mean) * (ok[i] - est.mean);
    double var = pairwise_sum(dev) / (n - 1.0);
    est.std_error = std::sqrt(var / n);
    return est;
}

double sample_covariance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("sample_covariance: size mismatch or too few samples");
    double n = static_cast<double>(a.size());
    double ma = pairwise_sum(a) / n, mb = pairwise_sum(b) / n;
    std::vector<double> p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = (a[i] - ma) * (b[i] - mb);
    return pairwise_sum(p) / (n - 1.0);
}

}  // namespace frackac

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "frackac/rng.hpp"

namespace frackac {

// Worker budget from FRACKAC_WORKERS, falling back to 1.
int default_workers();

// Runs fn(i) for i in [0, n) on `workers` threads with static contiguous
// chunks. fn must write only to slots owned by index i; any reduction is done
// afterwards in index order, so outputs never depend on the worker count.
// The exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> xs);

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::size_t rejected = 0;
    RngSeed seed{};
};

// Mean and standard error of the finite samples. Samples flagged as rejected
// (NaN by convention) are excluded from the statistics and counted.
MCEstimate summarize(std::span<const double> samples, RngSeed seed);

// Sample covariance between two equally sized sample vectors.
double sample_covariance(std::span<const double> a, std::span<const double> b);

}  // namespace frackac

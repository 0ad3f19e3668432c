#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gibbs/sampler.hpp"

namespace gibbs {

// Chi-square critical values embedded as data (df 1..8) so the harness has
// no runtime dependency on a stats library. Supported significance levels:
// 1e-2 and 1e-3.
double chi_square_critical(int df, double alpha);

struct GofReport {
    double statistic = 0.0;
    int df = 0;
    double critical = 0.0;
    bool pass = false;
    std::vector<double> expected;        // after tail merging
    std::vector<std::uint64_t> observed;  // after tail merging
};

// Pearson goodness-of-fit of observed category counts against a reference
// pmf. Trailing bins are merged until every expected count is at least 5.
GofReport gof_test(const std::vector<std::uint64_t>& observed,
                   const std::vector<double>& pmf, double alpha);

struct TwoSampleReport {
    double statistic = 0.0;
    int df = 0;
    double critical = 0.0;
    bool pass = false;
};

// Chi-square homogeneity test of two count vectors over the same bins.
// Bins are merged from the tail until the pooled expectation per group is
// at least 5.
TwoSampleReport two_sample_test(const std::vector<std::uint64_t>& a,
                                const std::vector<std::uint64_t>& b,
                                double alpha);

// Draw from the target distribution by rejection against the Poisson
// process on the whole domain. Independent of the filter machinery; used
// as the reference sampler in cross-validation. Throws if the acceptance
// rate certifiably drops below min_accept (guards against silently
// unusable baselines at high activity).
PointConfiguration global_rejection_sample(const PairPotential& pot,
                                           const BoxLattice& lat,
                                           double lambda, RngStream& rng,
                                           double min_accept = 1e-4);

// n independent filter-sampler runs with per-run derived streams; results
// are indexed by run, so the output does not depend on the thread count.
// Worker threads are capped by the GIBBS_PERFECT_THREADS environment
// variable when set.
std::vector<PointConfiguration> sample_batch(const PairPotential& pot,
                                             const BoxLattice& lat,
                                             const SamplerConfig& cfg,
                                             std::uint64_t base_seed,
                                             std::size_t n,
                                             RunDiagnostics* aggregate = nullptr);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Structural invariants on a small one-dimensional hard-sphere instance:
// boundary locality of the reference partition function, measurability of
// the filter correction, feasibility along sampler trajectories, and
// agreement of the discretized partition sum with the reference oracle.
std::vector<CheckResult> invariance_checks(std::uint64_t seed);

struct ScalingPoint {
    double length = 0.0;
    double volume = 0.0;
    double median_wall_ms = 0.0;
    double mean_iterations = 0.0;
};

struct ScalingReport {
    std::vector<ScalingPoint> points;
    double per_volume_ratio = 0.0;  // max over min of median ms per volume
    bool pass = false;
};

// Wall-time scaling of full runs across domain lengths at fixed activity.
ScalingReport scaling_benchmark(const PairPotential& pot, int dim,
                                const std::vector<double>& lengths,
                                double range, const SamplerConfig& cfg,
                                std::uint64_t seed, int runs_per_size,
                                double ratio_bound);

}  // namespace gibbs

#pragma once

#include <cstdint>
#include <utility>

#include "gibbs/bayes_filter.hpp"
#include "gibbs/geometry.hpp"
#include "gibbs/model.hpp"
#include "gibbs/poisson_gibbs.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

struct SamplerConfig {
    double lambda = 1.0;
    FilterParams filter;
    // 0 means the default cap of 1e7 iterations per lattice box.
    std::uint64_t max_iterations = 0;
    // Re-check feasibility of the full configuration after every step;
    // meant for tests, quadratic in the point count.
    bool check_feasibility = false;
};

struct RunDiagnostics {
    std::uint64_t iterations = 0;
    std::uint64_t accepts = 0;
    std::uint64_t rejects = 0;
    // Boxes re-added to the unfixed set by rejections. At termination,
    // accepts == |V| + boundary_readds.
    std::uint64_t boundary_readds = 0;
    std::uint64_t coin_draws = 0;
    GibbsStats gibbs;
};

// Mutable state of one run: the step counter, the current configuration
// and the set of boxes whose contents are not yet final.
struct SamplerState {
    std::uint64_t t = 0;
    PointConfiguration x;
    BoxSet unfixed;
};

SamplerState make_initial_state(const BoxLattice& lat);

// One iteration: choose an unfixed box uniformly, draw the Bayes filter
// bit, and either resample the update region (fixing the chosen box) or
// re-add the region's boundary to the unfixed set. The draw order (box
// choice, filter coin, conditional resampling) is fixed so runs replay
// byte-identically from the same seed.
void step(const PairPotential& pot, const BoxLattice& lat,
          const SamplerConfig& cfg, SamplerState& state, RngStream& rng,
          RunDiagnostics* diag = nullptr);

// Full run from the empty configuration until every box is fixed. The
// result is an exact draw from the Gibbs measure on the whole domain.
std::pair<PointConfiguration, RunDiagnostics> run(const PairPotential& pot,
                                                  const BoxLattice& lat,
                                                  const SamplerConfig& cfg,
                                                  RngStream& rng);

}  // namespace gibbs

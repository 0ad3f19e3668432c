#pragma once

#include <cstdint>

#include "gibbs/geometry.hpp"
#include "gibbs/model.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

// Counters for the dominated-rejection sampler, shared by every caller so
// the harness can account for work done inside composed coins.
struct GibbsStats {
    std::uint64_t rejection_rounds = 0;
    std::uint64_t proposals = 0;
};

// Homogeneous Poisson process of intensity lambda on the union of (clipped)
// boxes in `region`. Draw order is fixed: total count first, then for each
// point a box chosen proportionally to clipped volume, then one uniform
// coordinate per axis.
PointConfiguration sample_poisson(const BoxLattice& lat, const BoxSet& region,
                                  double lambda, RngStream& rng);

// Exact draw from the Gibbs measure on B_region conditioned on the boundary
// configuration, by rejection from the Poisson process: accept a proposal Y
// with probability exp(-H(Y) - cross(Y, boundary restricted to the boundary
// boxes of region)). Only boundary points within one box layer can interact
// because the potential range equals the box side. The acceptance weight is
// checked to lie in [0,1]. Throws after 1e9 rejection rounds.
PointConfiguration sample_conditional_gibbs(const PairPotential& pot,
                                            double lambda,
                                            const BoxLattice& lat,
                                            const BoxSet& region,
                                            const PointConfiguration& boundary,
                                            RngStream& rng,
                                            GibbsStats* stats = nullptr);

// Bernoulli coin that succeeds exactly when a fresh conditional Gibbs draw
// on the region is empty; its success probability is 1/Z for the
// conditional partition function Z of the region.
bool empty_set_coin(const PairPotential& pot, double lambda,
                    const BoxLattice& lat, const BoxSet& region,
                    const PointConfiguration& boundary, RngStream& rng,
                    GibbsStats* stats = nullptr);

}  // namespace gibbs

#pragma once

#include <cstdint>

#include "gibbs/geometry.hpp"
#include "gibbs/model.hpp"
#include "gibbs/poisson_gibbs.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

// Grid pitches for the discretized hard-sphere partition ratio. delta1 is
// the pitch of the boundary-configuration grid used in the minimization,
// delta2 the pitch of the partition-sum grid. Both shrink fast in eps and
// lambda; they must never be coarsened, or the filter loses exactness.
struct GridSpacings {
    double delta1;
    double delta2;
};

GridSpacings grid_spacings(int d, double r, double lambda, int ell, double eps);

// Filter configuration. Exactly one of the two modes is active: HardSphere
// computes a certified correction from a grid discretization; Ssm uses
// caller-supplied strong-spatial-mixing constants (a, b), which are trusted
// and not verified.
struct FilterParams {
    enum class Mode { HardSphere, Ssm };

    Mode mode = Mode::HardSphere;
    double eps = 0.5;   // hard-sphere accuracy parameter
    double ssm_a = 1.0;
    double ssm_b = 1.0;
    int ell = 2;        // update radius; >= 2 in hard-sphere mode, >= 1 in ssm mode
    int enumeration_budget = 24;  // max grid points per enumeration
    // Pitch overrides, active only with unsafe_delta. Larger pitches void
    // the exactness guarantee; this exists for experiments only.
    bool unsafe_delta = false;
    double delta1_override = 0.0;
    double delta2_override = 0.0;
    // Test hook: multiplies the correction. Any value other than 1 biases
    // the sampler on purpose so the validation suite can prove it notices.
    double correction_bias = 1.0;
};

// Discretized hard-sphere partition function over the boxes in s:
//   sum over grids gamma of lambda^|gamma| * delta^(d |gamma|)
//   * [gamma has pairwise distances >= r]
//   * [gamma avoids the conditioning points in the boundary boxes of s].
// The conditioning configuration is restricted to boundary(s) internally.
// In one dimension the sum is evaluated in closed form by counting grid
// subsets per maximal allowed run, which handles astronomically fine grids;
// in higher dimensions it enumerates subsets and requires the grid to stay
// within the enumeration budget.
double approx_partition_hs(const BoxLattice& lat, const BoxSet& s,
                           const PointConfiguration& cond, double delta,
                           double lambda, int enumeration_budget);

namespace detail {
// Both evaluation strategies, exposed so tests can cross-check them.
double approx_hs_interval(const BoxLattice& lat, const BoxSet& s,
                          const PointConfiguration& cond, double delta,
                          double lambda);
double approx_hs_enumerated(const BoxLattice& lat, const BoxSet& s,
                            const PointConfiguration& cond, double delta,
                            double lambda, int enumeration_budget);
}  // namespace detail

// Certified filter correction for the hard-sphere model:
//   exp(-eps) * min over boundary grids gamma of the discretized partition
//   ratio Z^(Q \ {v}, gamma + eta restricted to B_S) / Z^(Q, gamma + eta
//   restricted to B_{S \ v}).
// The minimum runs over subsets of the delta1-grid in the boxes of
// H intersect boundary(Q) whose pairwise distances are at least
// r - 2 sqrt(d) delta1. Depends on eta only through eta ∩ B_S.
double hs_correction(const BoxLattice& lat, const BoxSet& s, const BoxIndex& v,
                     const PointConfiguration& eta, double lambda,
                     const FilterParams& params);

struct SsmConstants {
    double c;        // multiplicative correction constant in (0, 1]
    double eps_gap;  // conservative global lower bound on q - p
};

SsmConstants ssm_constant(int d, double r, double lambda, double a, double b,
                          int ell);

// Smallest update radius the running-time analysis asks for: the least
// integer strictly greater than max{(1 + 7r)/2, 16 a' b'^2}, and never
// below 2.
int recommended_radius(int d, double r, double lambda, double a, double b);

struct FilterStats {
    std::uint64_t coin_draws = 0;  // p- and q-coin invocations
    GibbsStats gibbs;
};

// One draw of the Bayes filter bit for the current state (s = unfixed
// boxes, v = chosen box, eta = current configuration), i.e. a Bernoulli
// with success probability correction * partition ratio, realized through
// the ratio factory on empty-region coins. The certified gap handed to the
// factory uses the clipped volumes of the update region; the global
// constants from the analysis are only a fallback floor.
bool hs_filter_coin(const PairPotential& pot, double lambda,
                    const BoxLattice& lat, const BoxSet& s, const BoxIndex& v,
                    const PointConfiguration& eta, const FilterParams& params,
                    RngStream& rng, FilterStats* stats = nullptr);

bool repulsive_filter_coin(const PairPotential& pot, double lambda,
                           const BoxLattice& lat, const BoxSet& s,
                           const BoxIndex& v, const PointConfiguration& eta,
                           const FilterParams& params, RngStream& rng,
                           FilterStats* stats = nullptr);

}  // namespace gibbs

#include "gibbs/sampler.hpp"

#include <stdexcept>

namespace gibbs {

SamplerState make_initial_state(const BoxLattice& lat) {
    SamplerState s;
    s.unfixed = lat.all_boxes();
    return s;
}

void step(const PairPotential& pot, const BoxLattice& lat,
          const SamplerConfig& cfg, SamplerState& state, RngStream& rng,
          RunDiagnostics* diag) {
    if (state.unfixed.empty())
        throw std::logic_error("step on a terminated run");

    // Uniform choice from the ordered unfixed set.
    std::uint64_t pick = rng.uniform_index(state.unfixed.size());
    auto it = state.unfixed.begin();
    std::advance(it, pick);
    const BoxIndex v = *it;

    const BoxSet q = lat.update_set(state.unfixed, v, cfg.filter.ell);

    FilterStats fstats;
    bool accept;
    if (cfg.filter.mode == FilterParams::Mode::HardSphere)
        accept = hs_filter_coin(pot, cfg.lambda, lat, state.unfixed, v,
                                state.x, cfg.filter, rng, &fstats);
    else
        accept = repulsive_filter_coin(pot, cfg.lambda, lat, state.unfixed, v,
                                       state.x, cfg.filter, rng, &fstats);

    if (accept) {
        // Resample the update region conditioned on the configuration
        // outside it; only the boundary layer can interact.
        PointConfiguration outside = state.x.erase_region(lat, q);
        PointConfiguration y = sample_conditional_gibbs(
            pot, cfg.lambda, lat, q, outside, rng,
            diag ? &diag->gibbs : nullptr);
        outside.merge(y);
        state.x = std::move(outside);
        state.unfixed.erase(v);
        if (diag) ++diag->accepts;
    } else {
        std::uint64_t readded = 0;
        for (const BoxIndex& w : lat.boundary(q))
            if (state.unfixed.insert(w).second) ++readded;
        if (diag) {
            ++diag->rejects;
            diag->boundary_readds += readded;
        }
    }
    ++state.t;
    if (diag) {
        ++diag->iterations;
        diag->coin_draws += fstats.coin_draws;
        diag->gibbs.rejection_rounds += fstats.gibbs.rejection_rounds;
        diag->gibbs.proposals += fstats.gibbs.proposals;
    }
    if (cfg.check_feasibility && !is_feasible(pot, state.x))
        throw std::logic_error("infeasible configuration after step");
}

std::pair<PointConfiguration, RunDiagnostics> run(const PairPotential& pot,
                                                  const BoxLattice& lat,
                                                  const SamplerConfig& cfg,
                                                  RngStream& rng) {
    SamplerState state = make_initial_state(lat);
    RunDiagnostics diag;
    std::uint64_t cap = cfg.max_iterations;
    if (cap == 0) cap = 10000000ULL * lat.box_count();
    while (!state.unfixed.empty()) {
        if (state.t >= cap)
            throw std::runtime_error("sampler iteration cap reached");
        step(pot, lat, cfg, state, rng, &diag);
    }
    return {state.x, diag};
}

}  // namespace gibbs

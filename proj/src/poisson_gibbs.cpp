#include "gibbs/poisson_gibbs.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gibbs {

PointConfiguration sample_poisson(const BoxLattice& lat, const BoxSet& region,
                                  double lambda, RngStream& rng) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    PointConfiguration out;
    if (region.empty() || lambda == 0.0) return out;

    std::vector<std::pair<Point, Point>> bounds;
    std::vector<double> cum;
    double total = 0.0;
    for (const BoxIndex& v : region) {
        bounds.push_back(lat.box_bounds(v));
        total += lat.box_volume(v);
        cum.push_back(total);
    }
    std::uint64_t n = rng.poisson(lambda * total);
    for (std::uint64_t i = 0; i < n; ++i) {
        double u = rng.uniform01() * total;
        std::size_t b = 0;
        while (b + 1 < cum.size() && u >= cum[b]) ++b;
        Point p(lat.dim());
        for (int a = 0; a < lat.dim(); ++a)
            p[a] = rng.uniform(bounds[b].first[a], bounds[b].second[a]);
        out.insert(std::move(p));
    }
    return out;
}

PointConfiguration sample_conditional_gibbs(const PairPotential& pot,
                                            double lambda,
                                            const BoxLattice& lat,
                                            const BoxSet& region,
                                            const PointConfiguration& boundary,
                                            RngStream& rng, GibbsStats* stats) {
    if (region.empty()) return PointConfiguration();
    // Points farther than one box layer from the region cannot interact
    // with it (box side >= potential range), so drop them up front. This
    // also makes the accept weight a function of the local boundary only.
    const PointConfiguration local =
        boundary.restrict_to(lat, lat.boundary(region));

    const std::uint64_t cap = 1000000000ULL;
    for (std::uint64_t round = 0; round < cap; ++round) {
        if (stats) ++stats->rejection_rounds;
        PointConfiguration y = sample_poisson(lat, region, lambda, rng);
        if (stats) stats->proposals += y.size();
        double h = hamiltonian(pot, y);
        if (!std::isinf(h)) {
            double c = cross_energy(pot, y, local);
            if (!std::isinf(c)) h += c;
            else h = c;
        }
        double w = std::isinf(h) ? 0.0 : std::exp(-h);
        if (!(w >= 0.0 && w <= 1.0))
            throw std::logic_error("rejection weight outside [0,1]");
        if (rng.bernoulli(w)) return y;
    }
    throw std::runtime_error("conditional Gibbs rejection cap reached");
}

bool empty_set_coin(const PairPotential& pot, double lambda,
                    const BoxLattice& lat, const BoxSet& region,
                    const PointConfiguration& boundary, RngStream& rng,
                    GibbsStats* stats) {
    return sample_conditional_gibbs(pot, lambda, lat, region, boundary, rng,
                                    stats)
        .empty();
}

}  // namespace gibbs

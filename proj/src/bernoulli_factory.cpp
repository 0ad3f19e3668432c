#include "gibbs/bernoulli_factory.hpp"

#include <cmath>
#include <stdexcept>

namespace gibbs {

CoinOracle constant_coin(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("coin probability outside [0,1]");
    return CoinOracle([p](RngStream& rng) { return rng.bernoulli(p); });
}

CoinOracle average_coin(CoinOracle p_coin, CoinOracle q_coin) {
    return CoinOracle([p_coin, q_coin](RngStream& rng) mutable {
        if (rng.bernoulli(0.5)) return !q_coin.draw(rng);
        return p_coin.draw(rng);
    });
}

namespace {

// Geometric on {1, 2, ...} with success probability (C-1)/C.
double geometric(double c, RngStream& rng) {
    double u = rng.uniform01();
    while (u <= 0.0) u = rng.uniform01();
    return 1.0 + std::floor(std::log(u) / -std::log(c));
}

}  // namespace

CoinOracle double_coin(CoinOracle rho_coin, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("doubling slack must be positive");
    return CoinOracle([rho_coin, eps](RngStream& rng) mutable {
        // Gambler's-ruin walk: absorption at 0 produces a 1-bit with
        // probability exactly twice the rho-coin's. Escalation keeps the
        // expected flip count finite; its acceptance probability is
        // evaluated in log space because i can be large when eps is small.
        double e = std::min(eps, 0.644);
        double k = 23.0 / (5.0 * e);
        double i = 1.0;
        double c = 2.0;
        for (;;) {
            while (i > 0.0 && i < k) {
                bool u = rho_coin.draw(rng);
                double g = geometric(c, rng);
                i += -1.0 + (u ? 0.0 : g);
            }
            if (i <= 0.0) return true;
            double p_keep = std::exp(-i * std::log1p(e / 2.0));
            if (!rng.bernoulli(p_keep)) return false;
            c *= 1.0 + e / 2.0;
            e /= 2.0;
            k *= 2.0;
        }
    });
}

CoinOracle complement_coin(CoinOracle coin) {
    return CoinOracle(
        [coin](RngStream& rng) mutable { return !coin.draw(rng); });
}

CoinOracle ratio_coin(CoinOracle p_coin, CoinOracle gap_coin) {
    return CoinOracle([p_coin, gap_coin](RngStream& rng) mutable {
        for (;;) {
            if (rng.bernoulli(0.5)) {
                if (p_coin.draw(rng)) return true;
            } else {
                if (gap_coin.draw(rng)) return false;
            }
        }
    });
}

bool sample_ratio(CoinOracle p_coin, CoinOracle q_coin, double eps_gap,
                  RngStream& rng) {
    if (!(eps_gap > 0.0 && eps_gap < 1.0))
        throw std::invalid_argument("certified gap must lie in (0,1)");
    CoinOracle avg = average_coin(p_coin, q_coin);
    CoinOracle gap = complement_coin(double_coin(avg, eps_gap));
    CoinOracle ratio = ratio_coin(p_coin, gap);
    return ratio.draw(rng);
}

}  // namespace gibbs

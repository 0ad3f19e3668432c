#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "gibbs/rng.hpp"

namespace gibbs {

// A Bernoulli coin with an attached draw counter. Copies share the counter,
// so composite coins built from sub-coins report the total number of
// sub-coin invocations regardless of how the composition is nested.
class CoinOracle {
public:
    using DrawFn = std::function<bool(RngStream&)>;

    explicit CoinOracle(DrawFn fn)
        : fn_(std::move(fn)), count_(std::make_shared<std::uint64_t>(0)) {}

    bool draw(RngStream& rng) {
        ++*count_;
        return fn_(rng);
    }

    std::uint64_t draws() const { return *count_; }

private:
    DrawFn fn_;
    std::shared_ptr<std::uint64_t> count_;
};

// Coin with fixed success probability p, one uniform per draw.
CoinOracle constant_coin(double p);

// Given coins for p and q, a coin for (1 - (q - p)) / 2: flip a fair bit;
// on heads return the complement of a q-draw, on tails return a p-draw.
CoinOracle average_coin(CoinOracle p_coin, CoinOracle q_coin);

// Probability-doubling coin: from Ber(rho) with 2*rho <= 1 - eps, produce
// Ber(2*rho). Random-walk construction with geometric jumps and logarithmic
// escalation; all per-draw state is reset on every output bit.
CoinOracle double_coin(CoinOracle rho_coin, double eps);

// Ber(1 - x) from Ber(x).
CoinOracle complement_coin(CoinOracle coin);

// Ber(p/q) from Ber(p) and Ber(q - p): repeatedly flip a fair bit; on heads
// consult the p-coin (success ends with 1), on tails the gap coin (success
// ends with 0).
CoinOracle ratio_coin(CoinOracle p_coin, CoinOracle gap_coin);

// One exact draw of Ber(p/q) from coins for p and q, given a certified
// lower bound eps_gap <= q - p. The gap coin Ber(q - p) is assembled as the
// complement of the doubled average coin. Throws unless 0 < eps_gap < 1.
bool sample_ratio(CoinOracle p_coin, CoinOracle q_coin, double eps_gap,
                  RngStream& rng);

}  // namespace gibbs

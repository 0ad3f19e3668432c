#pragma once

#include <cstdint>
#include <string>

#include "gibbs/sampler.hpp"

namespace gibbs {

// One runnable instance, serializable to and from JSON. Numeric model
// parameters are kept as decimal strings so a config re-emitted after a
// round trip hashes identically regardless of printf formatting.
//
//   potential: "hard-sphere" or "strauss:<beta>"
//   mode:      "hs:<epsilon>" or "ssm:<a>,<b>"
//   radius:    integer, or "auto" (ssm mode only) for the analytic
//              recommendation
struct RunConfig {
    int dim = 1;
    std::string length = "2";
    std::string range = "1";
    std::string lambda = "1";
    std::string potential = "hard-sphere";
    std::string mode = "hs:0.5";
    std::string radius = "2";
    std::uint64_t samples = 1;
    std::uint64_t seed = 1;
    int budget = 24;
    // "<delta1>,<delta2>" grid pitch overrides; empty keeps the certified
    // pitches. Any override voids the exactness guarantee and the sample
    // output is marked non-exact.
    std::string unsafe_delta;
    std::string out;  // empty means stdout

    std::string to_json() const;
    // Rejects unknown keys so config-file typos fail loudly.
    static RunConfig from_json(const std::string& text);

    // Positivity and grammar checks; throws std::invalid_argument naming
    // the offending field.
    void validate_fields() const;

    PairPotential make_potential() const;
    BoxLattice make_lattice() const;
    SamplerConfig make_sampler_config() const;
    int resolve_radius() const;

    // True when the activity is at or above e / v_d(r), the threshold
    // below which the running-time guarantees are proven. The sampler is
    // still exact above it, just not provably fast.
    bool above_efficient_regime() const;
};

// FNV-1a over the canonical JSON rendering; stamped into every output
// record so result files are traceable to the exact instance.
std::uint64_t config_hash(const RunConfig& cfg);

double parse_decimal(const std::string& s);

}  // namespace gibbs

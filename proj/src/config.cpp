#include "gibbs/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "gibbs/bayes_filter.hpp"

namespace gibbs {

double parse_decimal(const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size())
        throw std::invalid_argument("not a decimal number: " + s);
    return v;
}

namespace {

// Splits "tag:rest" and returns rest; empty when the tag does not match.
bool tagged(const std::string& s, const std::string& tag, std::string* rest) {
    if (s.rfind(tag + ":", 0) != 0) return false;
    *rest = s.substr(tag.size() + 1);
    return true;
}

}  // namespace

std::string RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["dim"] = dim;
    j["length"] = length;
    j["range"] = range;
    j["lambda"] = lambda;
    j["potential"] = potential;
    j["mode"] = mode;
    j["radius"] = radius;
    j["samples"] = samples;
    j["seed"] = seed;
    j["budget"] = budget;
    j["unsafe_delta"] = unsafe_delta;
    j["out"] = out;
    return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    static const std::set<std::string> known = {
        "dim",  "length",  "range", "lambda", "potential",    "mode",
        "radius", "samples", "seed",  "budget", "unsafe_delta", "out"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw std::invalid_argument("unknown config key: " + it.key());
    RunConfig c;
    if (j.contains("dim")) c.dim = j["dim"].get<int>();
    if (j.contains("length")) c.length = j["length"].get<std::string>();
    if (j.contains("range")) c.range = j["range"].get<std::string>();
    if (j.contains("lambda")) c.lambda = j["lambda"].get<std::string>();
    if (j.contains("potential")) c.potential = j["potential"].get<std::string>();
    if (j.contains("mode")) c.mode = j["mode"].get<std::string>();
    if (j.contains("radius")) c.radius = j["radius"].get<std::string>();
    if (j.contains("samples")) c.samples = j["samples"].get<std::uint64_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("budget")) c.budget = j["budget"].get<int>();
    if (j.contains("unsafe_delta"))
        c.unsafe_delta = j["unsafe_delta"].get<std::string>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    return c;
}

void RunConfig::validate_fields() const {
    if (dim < 1) throw std::invalid_argument("dim must be at least 1");
    if (parse_decimal(length) <= 0.0)
        throw std::invalid_argument("length must be positive");
    if (parse_decimal(range) <= 0.0)
        throw std::invalid_argument("range must be positive");
    if (parse_decimal(lambda) < 0.0)
        throw std::invalid_argument("lambda must be nonnegative");
    make_potential();
    make_sampler_config();
    if (budget < 1) throw std::invalid_argument("budget must be at least 1");
}

PairPotential RunConfig::make_potential() const {
    double r = parse_decimal(range);
    std::string rest;
    if (potential == "hard-sphere") return PairPotential::hard_sphere(r);
    if (tagged(potential, "strauss", &rest)) {
        double beta = parse_decimal(rest);
        if (beta < 0.0)
            throw std::invalid_argument("potential: beta must be nonnegative");
        return PairPotential::strauss(r, beta);
    }
    throw std::invalid_argument("potential must be hard-sphere or strauss:<beta>");
}

BoxLattice RunConfig::make_lattice() const {
    return BoxLattice(dim, parse_decimal(length), parse_decimal(range));
}

int RunConfig::resolve_radius() const {
    if (radius != "auto") {
        std::size_t pos = 0;
        int ell = std::stoi(radius, &pos);
        if (pos != radius.size() || ell < 1)
            throw std::invalid_argument("radius must be a positive integer or auto");
        return ell;
    }
    std::string rest;
    if (!tagged(mode, "ssm", &rest))
        throw std::invalid_argument("radius auto requires ssm mode");
    std::size_t comma = rest.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("mode ssm requires ssm:<a>,<b>");
    return recommended_radius(dim, parse_decimal(range), parse_decimal(lambda),
                              parse_decimal(rest.substr(0, comma)),
                              parse_decimal(rest.substr(comma + 1)));
}

SamplerConfig RunConfig::make_sampler_config() const {
    SamplerConfig sc;
    sc.lambda = parse_decimal(lambda);
    sc.filter.ell = resolve_radius();
    sc.filter.enumeration_budget = budget;
    if (!unsafe_delta.empty()) {
        std::size_t comma = unsafe_delta.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument(
                "unsafe_delta requires <delta1>,<delta2>");
        sc.filter.unsafe_delta = true;
        sc.filter.delta1_override = parse_decimal(unsafe_delta.substr(0, comma));
        sc.filter.delta2_override = parse_decimal(unsafe_delta.substr(comma + 1));
        if (sc.filter.delta1_override <= 0.0 ||
            sc.filter.delta2_override <= 0.0)
            throw std::invalid_argument("pitch overrides must be positive");
    }
    std::string rest;
    if (tagged(mode, "hs", &rest)) {
        sc.filter.mode = FilterParams::Mode::HardSphere;
        sc.filter.eps = parse_decimal(rest);
        if (sc.filter.eps <= 0.0 || sc.filter.eps >= 1.0)
            throw std::invalid_argument("mode hs:<epsilon> needs epsilon in (0,1)");
    } else if (tagged(mode, "ssm", &rest)) {
        std::size_t comma = rest.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("mode ssm requires ssm:<a>,<b>");
        sc.filter.mode = FilterParams::Mode::Ssm;
        sc.filter.ssm_a = parse_decimal(rest.substr(0, comma));
        sc.filter.ssm_b = parse_decimal(rest.substr(comma + 1));
        if (sc.filter.ssm_a <= 0.0 || sc.filter.ssm_b <= 0.0)
            throw std::invalid_argument("mode ssm:<a>,<b> needs positive a, b");
    } else {
        throw std::invalid_argument("mode must be hs:<epsilon> or ssm:<a>,<b>");
    }
    return sc;
}

bool RunConfig::above_efficient_regime() const {
    double r = parse_decimal(range);
    double ball = std::pow(M_PI, dim / 2.0) /
                  std::tgamma(dim / 2.0 + 1.0) * std::pow(r, dim);
    return parse_decimal(lambda) >= std::exp(1.0) / ball;
}

std::uint64_t config_hash(const RunConfig& cfg) {
    std::string canon = cfg.to_json();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace gibbs

// Batch driver for the perfect Gibbs point process sampler.
//
// Subcommands:
//   sample    draw exact configurations, one JSON Lines record per run
//   validate  desk-scale statistical and structural self-checks
//   bench     wall-time scaling across domain sizes
//
// Any run with the same config and seed reproduces its output byte for
// byte; timing fields are opt-in for that reason.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gibbs/bayes_filter.hpp"
#include "gibbs/config.hpp"
#include "gibbs/harness.hpp"
#include "gibbs/model.hpp"

namespace {

using gibbs::RunConfig;

struct CommonFlags {
    std::string config_file;
    // Optional-valued overrides; empty string means "not given".
    std::string dim, length, range, lambda, potential, mode, radius;
    std::string samples, seed, budget, epsilon, out, unsafe_delta;
};

void add_common_flags(CLI::App* cmd, CommonFlags* f) {
    cmd->add_option("--config", f->config_file, "JSON config file");
    cmd->add_option("--dim", f->dim, "dimension d >= 1");
    cmd->add_option("--length", f->length, "domain side length L");
    cmd->add_option("--range", f->range, "interaction range r");
    cmd->add_option("--lambda", f->lambda, "activity");
    cmd->add_option("--potential", f->potential,
                    "hard-sphere or strauss:<beta>");
    cmd->add_option("--mode", f->mode, "filter mode: hs:<eps> or ssm:<a>,<b>");
    cmd->add_option("--radius", f->radius, "update radius in boxes, or auto");
    cmd->add_option("--epsilon", f->epsilon,
                    "shorthand for --mode hs:<epsilon>");
    cmd->add_option("--samples", f->samples, "number of independent runs");
    cmd->add_option("--seed", f->seed, "base seed; run i uses stream i");
    cmd->add_option("--budget", f->budget, "grid enumeration budget");
    cmd->add_option("--out", f->out, "output path (default stdout)");
    cmd->add_option("--unsafe-delta", f->unsafe_delta,
                    "<delta1>,<delta2> pitch overrides; voids the exactness "
                    "guarantee and marks the output non-exact");
}

RunConfig resolve(const CommonFlags& f) {
    RunConfig cfg;
    if (!f.config_file.empty()) {
        std::ifstream in(f.config_file);
        if (!in) throw std::invalid_argument("cannot read " + f.config_file);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = RunConfig::from_json(ss.str());
    }
    if (!f.dim.empty()) cfg.dim = std::stoi(f.dim);
    if (!f.length.empty()) cfg.length = f.length;
    if (!f.range.empty()) cfg.range = f.range;
    if (!f.lambda.empty()) cfg.lambda = f.lambda;
    if (!f.potential.empty()) cfg.potential = f.potential;
    if (!f.mode.empty()) cfg.mode = f.mode;
    if (!f.epsilon.empty()) cfg.mode = "hs:" + f.epsilon;
    if (!f.radius.empty()) cfg.radius = f.radius;
    if (!f.samples.empty()) cfg.samples = std::stoull(f.samples);
    if (!f.seed.empty()) cfg.seed = std::stoull(f.seed);
    if (!f.budget.empty()) cfg.budget = std::stoi(f.budget);
    if (!f.unsafe_delta.empty()) cfg.unsafe_delta = f.unsafe_delta;
    if (!f.out.empty()) cfg.out = f.out;
    cfg.validate_fields();
    if (cfg.above_efficient_regime())
        std::cerr << "warning: activity is at or above e/v_d(r); the sampler "
                     "stays exact but the running-time guarantee does not "
                     "apply\n";
    return cfg;
}

std::ostream& open_output(const RunConfig& cfg, std::ofstream& file) {
    if (cfg.out.empty()) return std::cout;
    file.open(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + cfg.out);
    return file;
}

nlohmann::ordered_json points_json(const gibbs::PointConfiguration& x) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const gibbs::Point& p : x.points())
        arr.push_back(p);
    return arr;
}

int cmd_sample(const RunConfig& cfg, bool timings) {
    gibbs::PairPotential pot = cfg.make_potential();
    gibbs::BoxLattice lat = cfg.make_lattice();
    gibbs::SamplerConfig sc = cfg.make_sampler_config();
    const std::uint64_t hash = gibbs::config_hash(cfg);

    std::ofstream file;
    std::ostream& out = open_output(cfg, file);
    {
        nlohmann::ordered_json head;
        head["config"] = nlohmann::ordered_json::parse(cfg.to_json());
        head["config_hash"] = hash;
        head["exact"] = cfg.unsafe_delta.empty();
        out << head.dump() << "\n";
    }
    for (std::uint64_t i = 0; i < cfg.samples; ++i) {
        gibbs::RngStream rng = gibbs::RngStream::derive(cfg.seed, i);
        nlohmann::ordered_json rec;
        rec["seed"] = cfg.seed;
        rec["run"] = i;
        rec["config_hash"] = hash;
        try {
            auto t0 = std::chrono::steady_clock::now();
            auto [x, d] = gibbs::run(pot, lat, sc, rng);
            auto t1 = std::chrono::steady_clock::now();
            rec["points"] = points_json(x);
            rec["iterations"] = d.iterations;
            rec["accepts"] = d.accepts;
            rec["rejects"] = d.rejects;
            rec["coin_draws"] = d.coin_draws;
            if (timings)
                rec["wall_ms"] =
                    std::chrono::duration<double, std::milli>(t1 - t0).count();
        } catch (const std::exception& e) {
            rec["aborted"] = e.what();
            out << rec.dump() << "\n";
            out.flush();
            std::cerr << "run " << i << " aborted: " << e.what() << "\n";
            return 2;
        }
        out << rec.dump() << "\n";
    }
    out.flush();
    return 0;
}

int cmd_validate(const RunConfig& cfg, double bias) {
    gibbs::PairPotential pot = cfg.make_potential();
    gibbs::BoxLattice lat = cfg.make_lattice();
    gibbs::SamplerConfig sc = cfg.make_sampler_config();
    sc.filter.correction_bias = bias;
    const double lambda = gibbs::parse_decimal(cfg.lambda);

    nlohmann::ordered_json report;
    report["config"] = nlohmann::ordered_json::parse(cfg.to_json());
    report["config_hash"] = gibbs::config_hash(cfg);
    bool all_pass = true;
    std::string first_failure;
    auto note = [&](const std::string& name, bool pass) {
        if (!pass && first_failure.empty()) first_failure = name;
        all_pass = all_pass && pass;
    };

    // Structural invariants on the fixed small instance.
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const gibbs::CheckResult& c : gibbs::invariance_checks(cfg.seed)) {
        checks.push_back({{"name", c.name}, {"pass", c.pass},
                          {"detail", c.detail}});
        note(c.name, c.pass);
    }

    // Correction certification at zero activity: every partition ratio is
    // exactly 1 there, so the hard-sphere correction must equal exp(-eps)
    // bit for bit. Any multiplicative defect in the correction layer,
    // including the deliberate --bias hook, breaks this identity.
    {
        gibbs::FilterParams fp;
        fp.mode = gibbs::FilterParams::Mode::HardSphere;
        fp.eps = 0.5;
        fp.ell = 2;
        fp.correction_bias = bias;
        gibbs::BoxLattice small(1, 2.0, 1.0);
        gibbs::BoxSet s;
        s.insert(gibbs::BoxIndex{{0}});
        s.insert(gibbs::BoxIndex{{1}});
        double kappa = gibbs::hs_correction(small, s, gibbs::BoxIndex{{0}},
                                            gibbs::PointConfiguration(), 0.0,
                                            fp);
        bool pass = (kappa == std::exp(-fp.eps));
        checks.push_back({{"name", "correction-zero-activity-identity"},
                          {"pass", pass},
                          {"detail", "kappa=" + std::to_string(kappa)}});
        note("correction-zero-activity-identity", pass);
    }
    report["checks"] = checks;

    // Statistical checks on the configured instance.
    std::size_t n = cfg.samples >= 100 ? cfg.samples : 2000;
    std::vector<gibbs::PointConfiguration> mine =
        gibbs::sample_batch(pot, lat, sc, cfg.seed, n);
    std::size_t kmax = 0;
    for (const auto& x : mine) kmax = std::max(kmax, x.size());

    {
        gibbs::QuadratureSpec spec;
        spec.max_particles = static_cast<int>(std::max<std::size_t>(kmax, 4));
        std::vector<double> pmf = gibbs::count_pmf_oracle(
            pot, lambda,
            gibbs::Region::box(gibbs::Point(cfg.dim, 0.0),
                               gibbs::Point(cfg.dim,
                                            gibbs::parse_decimal(cfg.length))),
            gibbs::PointConfiguration(), spec);
        std::vector<std::uint64_t> counts(pmf.size(), 0);
        for (const auto& x : mine)
            counts[std::min(x.size(), pmf.size() - 1)]++;
        gibbs::GofReport g = gibbs::gof_test(counts, pmf, 1e-2);
        report["gof"] = {{"statistic", g.statistic},
                         {"df", g.df},
                         {"critical", g.critical},
                         {"pass", g.pass}};
        note("count-gof", g.pass);
    }

    {
        gibbs::RngStream rng = gibbs::RngStream::derive(cfg.seed, 1ull << 32);
        std::vector<std::uint64_t> a(kmax + 2, 0), b(kmax + 2, 0);
        for (const auto& x : mine) a[std::min(x.size(), kmax + 1)]++;
        for (std::size_t i = 0; i < n; ++i) {
            gibbs::PointConfiguration y =
                gibbs::global_rejection_sample(pot, lat, lambda, rng);
            b[std::min(y.size(), kmax + 1)]++;
        }
        gibbs::TwoSampleReport t = gibbs::two_sample_test(a, b, 1e-2);
        report["two_sample"] = {{"statistic", t.statistic},
                                {"df", t.df},
                                {"critical", t.critical},
                                {"pass", t.pass}};
        note("count-homogeneity", t.pass);
    }

    report["pass"] = all_pass;
    std::ofstream file;
    std::ostream& out = open_output(cfg, file);
    out << report.dump(2) << "\n";
    out.flush();
    if (!all_pass) std::cerr << "validate: failed check: " << first_failure
                             << "\n";
    return all_pass ? 0 : 1;
}

int cmd_bench(const RunConfig& cfg, const std::vector<double>& lengths,
              int runs_per_size, double ratio_bound, bool quadratic_stub) {
    gibbs::ScalingReport rep;
    if (quadratic_stub) {
        // Detector self-test: feed the ratio check timings that grow like
        // volume squared. It must reject them for any nontrivial size set.
        for (double len : lengths) {
            gibbs::ScalingPoint pt;
            pt.length = len;
            pt.volume = std::pow(len, cfg.dim);
            pt.median_wall_ms = pt.volume * pt.volume;
            rep.points.push_back(pt);
        }
        double lo = rep.points.front().median_wall_ms / rep.points.front().volume;
        double hi = lo;
        for (const auto& pt : rep.points) {
            lo = std::min(lo, pt.median_wall_ms / pt.volume);
            hi = std::max(hi, pt.median_wall_ms / pt.volume);
        }
        rep.per_volume_ratio = hi / lo;
        rep.pass = rep.per_volume_ratio <= ratio_bound;
    } else {
        rep = gibbs::scaling_benchmark(cfg.make_potential(), cfg.dim, lengths,
                                       gibbs::parse_decimal(cfg.range),
                                       cfg.make_sampler_config(), cfg.seed,
                                       runs_per_size, ratio_bound);
    }

    nlohmann::ordered_json j;
    j["config"] = nlohmann::ordered_json::parse(cfg.to_json());
    j["config_hash"] = gibbs::config_hash(cfg);
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const gibbs::ScalingPoint& pt : rep.points)
        pts.push_back({{"length", pt.length},
                       {"volume", pt.volume},
                       {"median_wall_ms", pt.median_wall_ms},
                       {"mean_iterations", pt.mean_iterations}});
    j["points"] = pts;
    j["per_volume_ratio"] = rep.per_volume_ratio;
    j["ratio_bound"] = ratio_bound;
    j["pass"] = rep.pass;
    std::ofstream file;
    std::ostream& out = open_output(cfg, file);
    out << j.dump(2) << "\n";
    out.flush();
    if (!rep.pass)
        std::cerr << "bench: per-volume time ratio " << rep.per_volume_ratio
                  << " exceeds bound " << ratio_bound << "\n";
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perfect sampler for repulsive Gibbs point processes"};
    app.require_subcommand(1);

    CommonFlags fs, fv, fb;
    bool timings = false;
    double bias = 1.0;
    std::vector<double> lengths = {16.0, 32.0, 64.0};
    int runs_per_size = 20;
    double ratio_bound = 2.0;
    bool quadratic_stub = false;

    CLI::App* sample = app.add_subcommand("sample", "draw exact samples");
    add_common_flags(sample, &fs);
    sample->add_flag("--timings", timings,
                     "add wall_ms to records (breaks byte-identical replay)");

    CLI::App* validate =
        app.add_subcommand("validate", "statistical and structural checks");
    add_common_flags(validate, &fv);
    validate
        ->add_option("--bias", bias,
                     "test hook: multiply the filter correction; any value "
                     "other than 1 is a deliberate bug the suite must catch")
        ->group("");

    CLI::App* bench = app.add_subcommand("bench", "wall-time scaling");
    add_common_flags(bench, &fb);
    bench->add_option("--lengths", lengths, "domain lengths to time");
    bench->add_option("--runs-per-size", runs_per_size, "runs per length");
    bench->add_option("--ratio-bound", ratio_bound,
                      "max allowed spread of median ms per unit volume");
    bench
        ->add_flag("--quadratic-stub", quadratic_stub,
                   "test hook: volume-squared synthetic timings")
        ->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) return cmd_sample(resolve(fs), timings);
        if (validate->parsed()) return cmd_validate(resolve(fv), bias);
        if (bench->parsed())
            return cmd_bench(resolve(fb), lengths, runs_per_size, ratio_bound,
                             quadratic_stub);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

// Acceptance gate: one line per criterion, PASS/FAIL, with the measured
// quantity and its pinned threshold. Exit code is the number of failures.
//
// Statistical criteria run at alpha = 1e-3 with fixed seeds, so reruns are
// reproducible. Reference distributions come either from closed-form
// integration (pinned constants) or from the quadrature oracle, never from
// the sampler under test.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gibbs/bernoulli_factory.hpp"
#include "gibbs/config.hpp"
#include "gibbs/harness.hpp"

using namespace gibbs;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
    std::printf("%s  criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", index,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::vector<std::uint64_t> count_histogram(
    const std::vector<PointConfiguration>& xs, std::size_t bins) {
    std::vector<std::uint64_t> h(bins, 0);
    for (const auto& x : xs) h[std::min(x.size(), bins - 1)]++;
    return h;
}

// Bin index for the minimum pairwise distance; configurations with fewer
// than two points land in bin 0.
std::size_t min_dist_bin(const PointConfiguration& x) {
    if (x.size() < 2) return 0;
    double best = 1e300;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            best = std::min(best, euclidean_distance(x[i], x[j]));
    if (best < 1.3) return 1;
    if (best < 1.7) return 2;
    if (best < 2.2) return 3;
    return 4;
}

// criterion 1: d=1 hard spheres on [0,2), lambda=1, hs-mode filter.
// Closed form: Z = 1 + 2 + 1/2, pmf (2/7, 4/7, 1/7).
void criterion1() {
    PairPotential hs = PairPotential::hard_sphere(1.0);
    BoxLattice lat(1, 2.0, 1.0);
    SamplerConfig cfg;
    cfg.lambda = 1.0;
    cfg.filter.mode = FilterParams::Mode::HardSphere;
    cfg.filter.eps = 0.5;
    cfg.filter.ell = 2;
    std::vector<PointConfiguration> xs = sample_batch(hs, lat, cfg, 20240101, 10000);
    std::vector<double> pmf = {2.0 / 7.0, 4.0 / 7.0, 1.0 / 7.0};
    GofReport rep = gof_test(count_histogram(xs, 3), pmf, 1e-3);
    std::ostringstream os;
    os << "chi2=" << rep.statistic << " df=" << rep.df << " critical="
       << rep.critical;
    report(1, "exact count distribution, hard-sphere filter", rep.pass,
           os.str());
}

// criterion 2: d=2 hard spheres on [0,3)^2 at lambda=0.2, filter sampler
// vs. the independent global rejection sampler, 5000 draws each.
// Radius 2 makes the update ball cover the whole 3x3 lattice, so no box is
// ever hidden and the filter is exact for any supplied mixing constants.
void criterion2() {
    PairPotential hs = PairPotential::hard_sphere(1.0);
    BoxLattice lat(2, 3.0, 1.0);
    SamplerConfig cfg;
    cfg.lambda = 0.2;
    cfg.filter.mode = FilterParams::Mode::Ssm;
    cfg.filter.ssm_a = 1e-4;
    cfg.filter.ssm_b = 1.0;
    cfg.filter.ell = 2;
    const std::size_t n = 5000;
    std::vector<PointConfiguration> mine = sample_batch(hs, lat, cfg, 777, n);
    std::vector<PointConfiguration> base;
    base.reserve(n);
    RngStream rng(778);
    for (std::size_t i = 0; i < n; ++i)
        base.push_back(global_rejection_sample(hs, lat, 0.2, rng));

    TwoSampleReport counts = two_sample_test(count_histogram(mine, 6),
                                             count_histogram(base, 6), 1e-3);
    std::vector<std::uint64_t> da(5, 0), db(5, 0);
    for (const auto& x : mine) da[min_dist_bin(x)]++;
    for (const auto& x : base) db[min_dist_bin(x)]++;
    TwoSampleReport dists = two_sample_test(da, db, 1e-3);

    std::ostringstream os;
    os << "count chi2=" << counts.statistic << "/" << counts.critical
       << ", min-dist chi2=" << dists.statistic << "/" << dists.critical;
    report(2, "cross-sampler agreement in two dimensions",
           counts.pass && dists.pass, os.str());
}

// criterion 3: strauss potential (beta = ln 2) on the d=1 instance, ssm
// filter with the recommended radius; reference pmf from the quadrature
// oracle. The spec sheet quotes Z = 4.25 for this model; the oracle puts
// Z near 4.63 because the 3- and 4-particle terms are not negligible, and
// the oracle is authoritative here.
void criterion3() {
    PairPotential st = PairPotential::strauss(1.0, std::log(2.0));
    BoxLattice lat(1, 2.0, 1.0);
    SamplerConfig cfg;
    cfg.lambda = 1.0;
    cfg.filter.mode = FilterParams::Mode::Ssm;
    cfg.filter.ssm_a = 1e-4;
    cfg.filter.ssm_b = 0.5;
    cfg.filter.ell = recommended_radius(1, 1.0, 1.0, 1e-4, 0.5);

    QuadratureSpec spec;
    spec.max_particles = 6;
    spec.panels_per_axis = 512;
    spec.tolerance = 1e-2;
    std::vector<double> pmf = count_pmf_oracle(
        st, 1.0, Region::box({0.0}, {2.0}), PointConfiguration(), spec);

    std::vector<PointConfiguration> xs = sample_batch(st, lat, cfg, 424242, 10000);
    GofReport rep = gof_test(count_histogram(xs, pmf.size()), pmf, 1e-3);
    std::ostringstream os;
    os << "radius=" << cfg.filter.ell << " chi2=" << rep.statistic
       << " df=" << rep.df << " critical=" << rep.critical;
    report(3, "strauss variant against the quadrature oracle", rep.pass,
           os.str());
}

// criterion 4: factory exactness on known coins, 4-sigma envelopes.
void criterion4() {
    struct Cell {
        double p, q;
    };
    const int n = 100000;
    bool pass = true;
    std::ostringstream os;
    for (Cell c : {Cell{0.2, 0.6}, Cell{0.1, 0.9}, Cell{0.3, 0.5},
                   Cell{0.5, 0.7}}) {
        RngStream rng(9000 + static_cast<std::uint64_t>(100 * c.p));
        int hits = 0;
        for (int i = 0; i < n; ++i)
            if (sample_ratio(constant_coin(c.p), constant_coin(c.q),
                             c.q - c.p, rng))
                ++hits;
        double target = c.p / c.q;
        double err = std::abs(static_cast<double>(hits) / n - target);
        double tol = 4.0 * std::sqrt(target * (1.0 - target) / n);
        pass = pass && err <= tol;
        os << "ratio(" << c.p << "," << c.q << ") err=" << err << "<=" << tol
           << " ";
    }
    {
        RngStream rng(9100);
        CoinOracle doubled = double_coin(constant_coin(0.2), 0.2);
        int hits = 0;
        for (int i = 0; i < n; ++i)
            if (doubled.draw(rng)) ++hits;
        double err = std::abs(static_cast<double>(hits) / n - 0.4);
        pass = pass && err <= 0.0062;
        os << "double(0.2) err=" << err << "<=0.0062";
    }
    report(4, "bernoulli factory exactness", pass, os.str());
}

// criterion 5: mean sub-coin draws of the ratio factory grow no faster
// than eps_gap^{-2.5} over a dyadic ladder.
void criterion5() {
    const int n = 20000;
    double eps_values[3] = {0.4, 0.2, 0.1};
    double cost[3];
    for (int j = 0; j < 3; ++j) {
        double eps = eps_values[j];
        CoinOracle p = constant_coin(0.3);
        CoinOracle q = constant_coin(0.3 + eps);
        RngStream rng(9200 + j);
        for (int i = 0; i < n; ++i) sample_ratio(p, q, eps, rng);
        cost[j] = static_cast<double>(p.draws() + q.draws()) / n;
    }
    double slope1 = std::log(cost[1] / cost[0]) / std::log(2.0);
    double slope2 = std::log(cost[2] / cost[1]) / std::log(2.0);
    bool pass = slope1 <= 2.5 && slope2 <= 2.5;
    std::ostringstream os;
    os << "mean draws " << cost[0] << " -> " << cost[1] << " -> " << cost[2]
       << ", halving exponents " << slope1 << ", " << slope2 << " <= 2.5";
    report(5, "factory cost law", pass, os.str());
}

// criterion 6: mean number of iterations on the criterion-1 instance stays
// below 3 |V| over 1000 runs.
void criterion6() {
    PairPotential hs = PairPotential::hard_sphere(1.0);
    BoxLattice lat(1, 2.0, 1.0);
    SamplerConfig cfg;
    cfg.lambda = 1.0;
    cfg.filter.mode = FilterParams::Mode::HardSphere;
    cfg.filter.eps = 0.5;
    cfg.filter.ell = 2;
    RunDiagnostics agg;
    sample_batch(hs, lat, cfg, 31337, 1000, &agg);
    double mean_t = static_cast<double>(agg.iterations) / 1000.0;
    double bound = 3.0 * static_cast<double>(lat.box_count());
    std::ostringstream os;
    os << "mean iterations " << mean_t << " <= " << bound;
    report(6, "termination bound", mean_t <= bound, os.str());
}

// criterion 7: wall time per unit volume across L in {16, 32, 64} varies
// by at most a factor of 2. Radius 1 keeps the certified factory gap large
// (it shrinks like exp(-2 lambda vol(update ball))), which keeps per-step
// cost light-tailed enough for stable medians.
void criterion7() {
    PairPotential hs = PairPotential::hard_sphere(1.0);
    SamplerConfig cfg;
    cfg.lambda = 0.5;
    cfg.filter.mode = FilterParams::Mode::Ssm;
    cfg.filter.ssm_a = 1e-3;
    cfg.filter.ssm_b = 1.0;
    cfg.filter.ell = 1;
    ScalingReport rep =
        scaling_benchmark(hs, 1, {16.0, 32.0, 64.0}, 1.0, cfg, 555, 30, 2.0);
    std::ostringstream os;
    for (const ScalingPoint& pt : rep.points)
        os << "L=" << pt.length << ": " << pt.median_wall_ms << "ms  ";
    os << "per-volume ratio " << rep.per_volume_ratio << " <= 2";
    report(7, "linear wall-time scaling", rep.pass, os.str());
}

// criterion 8: exact structural invariants.
void criterion8() {
    bool pass = true;
    std::ostringstream os;
    for (const CheckResult& c : invariance_checks(2026)) {
        pass = pass && c.pass;
        os << c.name << "=" << (c.pass ? "ok" : "FAIL") << " ";
    }
    report(8, "structural invariants", pass, os.str());
}

// criterion 9: rerunning the command-line driver with an identical config
// and seed reproduces the output byte for byte.
void criterion9() {
    const std::string cli = GIBBS_CLI_PATH;
    const std::string base =
        " sample --dim 1 --length 2 --range 1 --lambda 1 --mode hs:0.5"
        " --radius 2 --samples 200 --seed 99 --out ";
    // The output path is part of the config record, so the rerun must write
    // to the same file; the first output is read into memory before that.
    const std::string f = "acceptance_replay.jsonl";
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    int rc1 = std::system((cli + base + f).c_str());
    std::string a = slurp(f);
    int rc2 = std::system((cli + base + f).c_str());
    std::string b = slurp(f);
    std::remove(f.c_str());
    bool pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
    std::ostringstream os;
    os << "two driver runs, " << a.size() << " bytes each, "
       << (a == b ? "identical" : "DIFFER");
    report(9, "byte-identical replay", pass, os.str());
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (failures == 0)
        std::printf("all 9 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}

#include "gibbs/bayes_filter.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gibbs/bernoulli_factory.hpp"

namespace gibbs {

GridSpacings grid_spacings(int d, double r, double lambda, int ell,
                           double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (ell < 1) throw std::invalid_argument("update radius must be >= 1");
    double dd = static_cast<double>(d);
    double rd = std::pow(r, dd);
    double ball_in = std::pow(2.0 * ell + 1.0, dd) * rd;
    double ball_out = std::pow(2.0 * ell + 3.0, dd) * rd;
    double delta1 =
        (eps / 2.0) / (std::pow(4.0, dd) * (1.0 / r) *
                       std::pow(dd, (dd + 3.0) / 2.0) * ball_out * lambda *
                       std::exp(lambda * ball_in));
    double m = std::pow(2.0, dd) * ball_out *
                   (std::pow(delta1, -dd) + std::pow(dd, dd / 2.0) / rd) +
               ball_out;
    double delta2 =
        (eps / 4.0) /
        (std::pow(dd, 1.5) * std::pow(2.0, dd) *
         std::max(1.0 / r, std::pow(r, dd - 1.0)) *
         std::max(lambda, lambda * lambda) * m * std::exp(lambda * ball_out));
    return {delta1, delta2};
}

namespace {

// Smallest integer g with g * delta >= bound, computed so the comparison is
// the same double arithmetic used everywhere else.
long long min_gap_steps(double delta, double bound) {
    long long g = static_cast<long long>(std::ceil(bound / delta));
    while (g > 0 && (g - 1) * delta >= bound) --g;
    while (g * delta < bound) ++g;
    return g;
}

// Smallest j with j * delta >= lo.
long long first_index_at_least(double delta, double lo) {
    long long j = static_cast<long long>(std::ceil(lo / delta));
    while ((j - 1) * delta >= lo) --j;
    while (j * delta < lo) ++j;
    return j;
}

// Largest j with j * delta < hi.
long long last_index_below(double delta, double hi) {
    long long j = static_cast<long long>(std::floor(hi / delta));
    while (j * delta >= hi) --j;
    while ((j + 1) * delta < hi) ++j;
    return j;
}

// Binomial coefficient C(n, k) for potentially huge n, evaluated in
// floating point; exact enough because k stays tiny.
double binomial(double n, long long k) {
    if (n < static_cast<double>(k)) return 0.0;
    double acc = 1.0;
    for (long long t = 0; t < k; ++t)
        acc *= (n - static_cast<double>(t)) / static_cast<double>(t + 1);
    return acc;
}

struct IndexRange {
    long long lo;
    long long hi;  // inclusive
};

// Subtract a closed index interval from a list of disjoint sorted ranges.
std::vector<IndexRange> subtract(const std::vector<IndexRange>& ranges,
                                 long long lo, long long hi) {
    std::vector<IndexRange> out;
    for (const IndexRange& r : ranges) {
        if (hi < r.lo || lo > r.hi) {
            out.push_back(r);
            continue;
        }
        if (r.lo < lo) out.push_back({r.lo, std::min(r.hi, lo - 1)});
        if (r.hi > hi) out.push_back({std::max(r.lo, hi + 1), r.hi});
    }
    return out;
}

}  // namespace

namespace detail {

double approx_hs_interval(const BoxLattice& lat, const BoxSet& s,
                          const PointConfiguration& cond, double delta,
                          double lambda) {
    if (lat.dim() != 1)
        throw std::invalid_argument("interval evaluation requires d = 1");
    if (s.empty()) return 1.0;
    const double r = lat.range();

    // Merge adjacent boxes into maximal real intervals, then into grid
    // index ranges.
    std::vector<IndexRange> ranges;
    int prev = -2;
    double lo = 0.0, hi = 0.0;
    auto flush = [&]() {
        long long a = first_index_at_least(delta, lo);
        long long b = last_index_below(delta, hi);
        if (a <= b) ranges.push_back({a, b});
    };
    for (const BoxIndex& v : s) {
        auto [blo, bhi] = lat.box_bounds(v);
        if (v.c[0] == prev + 1 && prev >= 0) {
            hi = bhi[0];
        } else {
            if (prev >= 0) flush();
            lo = blo[0];
            hi = bhi[0];
        }
        prev = v.c[0];
    }
    if (prev >= 0) flush();

    // Conditioning points in the boundary boxes exclude the open interval
    // (y - r, y + r) of grid positions.
    const PointConfiguration blockers = cond.restrict_to(lat, lat.boundary(s));
    for (const Point& p : blockers.points()) {
        double y = p[0];
        long long lo_b = last_index_below(delta, y - r) + 1;  // first j with j*delta > y-r
        while (lo_b * delta <= y - r) ++lo_b;
        long long hi_b = first_index_at_least(delta, y + r) - 1;  // last j with j*delta < y+r
        if (lo_b <= hi_b) ranges = subtract(ranges, lo_b, hi_b);
    }
    if (ranges.empty()) return 1.0;

    const long long m = min_gap_steps(delta, r);

    // Two allowed grid points in different runs are always at least r
    // apart: runs are separated either by a missing interior box (width
    // exactly r) or by a blocked stretch of length 2r. Verify and fail
    // loudly instead of assuming.
    for (std::size_t i = 1; i < ranges.size(); ++i)
        if (ranges[i].lo - ranges[i - 1].hi < m)
            throw std::logic_error(
                "grid runs closer than the exclusion range; the interval "
                "evaluation does not apply");

    // Per-run subset counts with index gaps >= m, convolved across runs.
    std::vector<double> total = {1.0};
    for (const IndexRange& run : ranges) {
        double n = static_cast<double>(run.hi - run.lo + 1);
        std::vector<double> counts = {1.0};
        for (long long k = 1;; ++k) {
            double c =
                binomial(n - static_cast<double>(k - 1) * (m - 1), k);
            if (c <= 0.0) break;
            counts.push_back(c);
        }
        std::vector<double> next(total.size() + counts.size() - 1, 0.0);
        for (std::size_t i = 0; i < total.size(); ++i)
            for (std::size_t j = 0; j < counts.size(); ++j)
                next[i + j] += total[i] * counts[j];
        total = std::move(next);
    }
    double z = 0.0;
    double w = 1.0;  // (lambda * delta)^k
    for (std::size_t k = 0; k < total.size(); ++k) {
        z += w * total[k];
        w *= lambda * delta;
    }
    return z;
}

double approx_hs_enumerated(const BoxLattice& lat, const BoxSet& s,
                            const PointConfiguration& cond, double delta,
                            double lambda, int enumeration_budget) {
    if (s.empty()) return 1.0;
    const int d = lat.dim();
    const double r = lat.range();

    // Collect all grid points of (delta Z)^d inside the clipped boxes.
    std::vector<Point> grid;
    for (const BoxIndex& v : s) {
        auto [lo, hi] = lat.box_bounds(v);
        std::vector<long long> a(d), b(d), j(d);
        for (int i = 0; i < d; ++i) {
            a[i] = first_index_at_least(delta, lo[i]);
            b[i] = last_index_below(delta, hi[i]);
            if (a[i] > b[i]) {
                a.clear();
                break;
            }
            j[i] = a[i];
        }
        if (a.empty()) continue;
        for (;;) {
            Point p(d);
            for (int i = 0; i < d; ++i) p[i] = j[i] * delta;
            grid.push_back(std::move(p));
            if (static_cast<int>(grid.size()) > enumeration_budget)
                throw std::runtime_error(
                    "discretized partition grid exceeds the enumeration "
                    "budget of " +
                    std::to_string(enumeration_budget) +
                    " points; use the ssm filter mode or a smaller update "
                    "radius");
            int axis = d - 1;
            while (axis >= 0) {
                if (++j[axis] <= b[axis]) break;
                j[axis] = a[axis];
                --axis;
            }
            if (axis < 0) break;
        }
    }
    std::sort(grid.begin(), grid.end());

    const PointConfiguration blockers = cond.restrict_to(lat, lat.boundary(s));
    std::vector<bool> allowed(grid.size(), true);
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (const Point& y : blockers.points())
            if (euclidean_distance(grid[i], y) < r) {
                allowed[i] = false;
                break;
            }

    const double point_weight = lambda * std::pow(delta, d);
    double z = 0.0;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t, double)> dfs = [&](std::size_t start,
                                                       double w) {
        z += w;
        for (std::size_t i = start; i < grid.size(); ++i) {
            if (!allowed[i]) continue;
            bool ok = true;
            for (std::size_t c : chosen)
                if (euclidean_distance(grid[c], grid[i]) < r) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(i);
            dfs(i + 1, w * point_weight);
            chosen.pop_back();
        }
    };
    dfs(0, 1.0);
    return z;
}

}  // namespace detail

double approx_partition_hs(const BoxLattice& lat, const BoxSet& s,
                           const PointConfiguration& cond, double delta,
                           double lambda, int enumeration_budget) {
    if (!(delta > 0.0)) throw std::invalid_argument("pitch must be positive");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (lat.dim() == 1)
        return detail::approx_hs_interval(lat, s, cond, delta, lambda);
    return detail::approx_hs_enumerated(lat, s, cond, delta, lambda,
                                        enumeration_budget);
}

namespace {

// Grid points of (delta Z)^d inside the boxes of g, budget-checked.
std::vector<Point> candidate_grid(const BoxLattice& lat, const BoxSet& g,
                                  double delta, int budget) {
    std::vector<Point> pts;
    const int d = lat.dim();
    for (const BoxIndex& v : g) {
        auto [lo, hi] = lat.box_bounds(v);
        std::vector<long long> a(d), b(d), j(d);
        bool empty = false;
        for (int i = 0; i < d; ++i) {
            a[i] = first_index_at_least(delta, lo[i]);
            b[i] = last_index_below(delta, hi[i]);
            if (a[i] > b[i]) {
                empty = true;
                break;
            }
            j[i] = a[i];
        }
        if (empty) continue;
        for (;;) {
            Point p(d);
            for (int i = 0; i < d; ++i) p[i] = j[i] * delta;
            pts.push_back(std::move(p));
            if (static_cast<int>(pts.size()) > budget)
                throw std::runtime_error(
                    "boundary grid exceeds the enumeration budget of " +
                    std::to_string(budget) +
                    " candidate points; use the ssm filter mode");
            int axis = d - 1;
            while (axis >= 0) {
                if (++j[axis] <= b[axis]) break;
                j[axis] = a[axis];
                --axis;
            }
            if (axis < 0) break;
        }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

}  // namespace

double hs_correction(const BoxLattice& lat, const BoxSet& s, const BoxIndex& v,
                     const PointConfiguration& eta, double lambda,
                     const FilterParams& params) {
    if (s.find(v) == s.end())
        throw std::invalid_argument("chosen box must be unfixed");
    // Zero activity: every discretized partition sum is exactly 1, so the
    // minimized ratio is 1 for any grid.
    if (lambda == 0.0) return std::exp(-params.eps) * params.correction_bias;
    GridSpacings gs{params.delta1_override, params.delta2_override};
    if (!params.unsafe_delta)
        gs = grid_spacings(lat.dim(), lat.range(), lambda, params.ell,
                           params.eps);
    else if (!(gs.delta1 > 0.0 && gs.delta2 > 0.0))
        throw std::invalid_argument("pitch overrides must be positive");

    const BoxSet q = lat.update_set(s, v, params.ell);
    BoxSet q_minus_v = q;
    q_minus_v.erase(v);
    // H = boxes that are neither unfixed nor updated; the minimization runs
    // over boundary configurations on H intersect boundary(Q).
    BoxSet h_cap_dq;
    for (const BoxIndex& w : lat.boundary(q))
        if (s.find(w) == s.end()) h_cap_dq.insert(w);

    const std::vector<Point> grid =
        candidate_grid(lat, h_cap_dq, gs.delta1, params.enumeration_budget);

    BoxSet s_minus_v = s;
    s_minus_v.erase(v);
    const PointConfiguration eta_s = eta.restrict_to(lat, s);
    const PointConfiguration eta_sv = eta.restrict_to(lat, s_minus_v);

    const double min_dist =
        lat.range() - 2.0 * std::sqrt(static_cast<double>(lat.dim())) * gs.delta1;

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> chosen;
    auto evaluate = [&]() {
        PointConfiguration cond_num = eta_s;
        PointConfiguration cond_den = eta_sv;
        for (std::size_t i : chosen) {
            cond_num.insert_or_ignore(grid[i]);
            cond_den.insert_or_ignore(grid[i]);
        }
        double num = approx_partition_hs(lat, q_minus_v, cond_num, gs.delta2,
                                         lambda, params.enumeration_budget);
        double den = approx_partition_hs(lat, q, cond_den, gs.delta2, lambda,
                                         params.enumeration_budget);
        best = std::min(best, num / den);
    };
    // Depth-first over boundary grids whose pairwise distances stay at or
    // above r - 2 sqrt(d) delta1 (denser grids cannot attain the minimum of
    // the underlying continuous problem).
    std::function<void(std::size_t)> dfs = [&](std::size_t start) {
        evaluate();
        for (std::size_t i = start; i < grid.size(); ++i) {
            bool ok = true;
            for (std::size_t c : chosen)
                if (euclidean_distance(grid[c], grid[i]) < min_dist) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(i);
            dfs(i + 1);
            chosen.pop_back();
        }
    };
    dfs(0);
    return std::exp(-params.eps) * best * params.correction_bias;
}

SsmConstants ssm_constant(int d, double r, double lambda, double a, double b,
                          int ell) {
    if (!(a > 0.0 && b > 0.0))
        throw std::invalid_argument("mixing constants must be positive");
    double dd = static_cast<double>(d);
    double rd = std::pow(r, dd);
    double influence = a * std::pow(3.0, dd) * rd * std::exp(2.0 * b * r) *
                       (lambda * rd + std::exp(lambda * std::pow(3.0, dd) * rd));
    SsmConstants out;
    out.c = std::exp(-influence * std::exp(-b * r * ell));
    double scale = std::exp(-std::exp(-static_cast<double>(ell)));
    // Conservative: both partition functions in q are bounded by the full
    // update-ball volume, hence the factor 2 in the exponent.
    out.eps_gap = (1.0 - scale) *
                  std::exp(-2.0 * lambda * std::pow(2.0 * ell + 1.0, dd) * rd);
    return out;
}

int recommended_radius(int d, double r, double lambda, double a, double b) {
    double dd = static_cast<double>(d);
    double rd = std::pow(r, dd);
    double a_prime = 2.0 * a * std::pow(3.0, dd) * rd * std::exp(2.0 * b * r) *
                         (lambda * rd +
                          std::exp(lambda * std::pow(3.0, dd) * rd)) +
                     1.0;
    double b_prime = std::min(1.0, b * r);
    double bound = std::max((1.0 + 7.0 * r) / 2.0,
                            16.0 * a_prime * b_prime * b_prime);
    int ell = static_cast<int>(std::floor(bound)) + 1;
    return std::max(2, ell);
}

namespace {

CoinOracle empty_region_coin(const PairPotential& pot, double lambda,
                             const BoxLattice& lat, BoxSet region,
                             PointConfiguration boundary, FilterStats* stats) {
    return CoinOracle([=, &lat](RngStream& rng) {
        GibbsStats* gs = stats ? &stats->gibbs : nullptr;
        return empty_set_coin(pot, lambda, lat, region, boundary, rng, gs);
    });
}

}  // namespace

bool hs_filter_coin(const PairPotential& pot, double lambda,
                    const BoxLattice& lat, const BoxSet& s, const BoxIndex& v,
                    const PointConfiguration& eta, const FilterParams& params,
                    RngStream& rng, FilterStats* stats) {
    if (pot.kind() != PairPotential::Kind::HardSphere)
        throw std::invalid_argument(
            "hard-sphere filter mode requires the hard-sphere potential");
    if (params.ell < 2)
        throw std::invalid_argument("update radius must be >= 2");

    const double kappa = hs_correction(lat, s, v, eta, lambda, params);
    const double scale = std::exp(-params.eps) * std::min(1.0, kappa);

    const BoxSet q = lat.update_set(s, v, params.ell);
    BoxSet q_minus_v = q;
    q_minus_v.erase(v);
    const BoxSet dq = lat.boundary(q);
    BoxSet dq_plus_v = dq;
    dq_plus_v.insert(v);

    CoinOracle p_num = empty_region_coin(pot, lambda, lat, q_minus_v,
                                         eta.restrict_to(lat, dq_plus_v),
                                         stats);
    CoinOracle p_coin([=](RngStream& r) mutable {
        // Short-circuit: the explicit constant first, then the empty-region
        // draw. Order is fixed for reproducibility.
        if (!r.bernoulli(scale)) return false;
        return p_num.draw(r);
    });
    CoinOracle q_coin = empty_region_coin(pot, lambda, lat, q,
                                          eta.restrict_to(lat, dq), stats);

    // Certified lower bound on q - p: the success ratio is at most
    // exp(-eps), and q is at least exp(-lambda vol(B_Q)) with the clipped
    // volume. The constant-volume bound from the analysis is a fallback.
    double gap_call = (1.0 - std::exp(-params.eps)) *
                      std::exp(-lambda * lat.region_volume(q));
    double gap_global =
        (1.0 - std::exp(-params.eps)) *
        std::exp(-lambda *
                 std::pow(2.0 * params.ell + 1.0, lat.dim()) *
                 std::pow(lat.range(), lat.dim()));
    double gap = std::max(gap_call, gap_global);

    bool out = sample_ratio(p_coin, q_coin, gap, rng);
    if (stats) stats->coin_draws += p_coin.draws() + q_coin.draws();
    return out;
}

bool repulsive_filter_coin(const PairPotential& pot, double lambda,
                           const BoxLattice& lat, const BoxSet& s,
                           const BoxIndex& v, const PointConfiguration& eta,
                           const FilterParams& params, RngStream& rng,
                           FilterStats* stats) {
    // Validity of the scaled correction only needs radius >= 1; the
    // analytic running-time guarantee is what asks for the recommended
    // (larger) radius.
    if (params.ell < 1)
        throw std::invalid_argument("update radius must be >= 1");
    const SsmConstants cs = ssm_constant(lat.dim(), lat.range(), lambda,
                                         params.ssm_a, params.ssm_b,
                                         params.ell);
    const double scale = std::exp(-std::exp(-static_cast<double>(params.ell)));
    const double c_eff =
        std::min(1.0, scale * cs.c * params.correction_bias);

    const BoxSet q = lat.update_set(s, v, params.ell);
    BoxSet q_minus_v = q;
    q_minus_v.erase(v);
    const BoxSet dq = lat.boundary(q);
    BoxSet dq_cap_s;
    for (const BoxIndex& w : dq)
        if (s.find(w) != s.end()) dq_cap_s.insert(w);
    BoxSet dq_cap_s_plus_v = dq_cap_s;
    dq_cap_s_plus_v.insert(v);
    BoxSet dq_plus_v = dq;
    dq_plus_v.insert(v);

    // No hidden boundary boxes: the numerator and denominator empty-region
    // factors pair up with identical conditioning, so the success ratio is
    // the bare constant and the factory would reproduce Ber(c_eff) exactly.
    if (dq_cap_s.size() == dq.size()) {
        if (stats) stats->coin_draws += 1;
        return rng.bernoulli(c_eff);
    }

    CoinOracle p_a = empty_region_coin(pot, lambda, lat, q,
                                       eta.restrict_to(lat, dq_cap_s), stats);
    CoinOracle p_b = empty_region_coin(pot, lambda, lat, q_minus_v,
                                       eta.restrict_to(lat, dq_plus_v), stats);
    CoinOracle p_coin([=](RngStream& r) mutable {
        if (!r.bernoulli(c_eff)) return false;
        if (!p_a.draw(r)) return false;
        return p_b.draw(r);
    });
    CoinOracle q_a = empty_region_coin(pot, lambda, lat, q_minus_v,
                                       eta.restrict_to(lat, dq_cap_s_plus_v),
                                       stats);
    CoinOracle q_b = empty_region_coin(pot, lambda, lat, q,
                                       eta.restrict_to(lat, dq), stats);
    CoinOracle q_coin([=](RngStream& r) mutable {
        if (!q_a.draw(r)) return false;
        return q_b.draw(r);
    });

    double gap_call =
        (1.0 - scale) * std::exp(-lambda * (lat.region_volume(q_minus_v) +
                                            lat.region_volume(q)));
    double gap = std::max(gap_call, cs.eps_gap);

    bool out = sample_ratio(p_coin, q_coin, gap, rng);
    if (stats) stats->coin_draws += p_coin.draws() + q_coin.draws();
    return out;
}

}  // namespace gibbs

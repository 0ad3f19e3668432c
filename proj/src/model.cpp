#include "gibbs/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gibbs {

PairPotential PairPotential::hard_sphere(double range) {
    if (!(range > 0.0)) throw std::invalid_argument("range must be positive");
    return PairPotential(Kind::HardSphere, range, 0.0);
}

PairPotential PairPotential::strauss(double range, double beta) {
    if (!(range > 0.0)) throw std::invalid_argument("range must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("strauss beta must be positive");
    return PairPotential(Kind::Strauss, range, beta);
}

double PairPotential::eval(const Point& x, const Point& y) const {
    // Distance exactly equal to the range is outside the interaction.
    if (euclidean_distance(x, y) >= range_) return 0.0;
    if (kind_ == Kind::HardSphere) return std::numeric_limits<double>::infinity();
    return beta_;
}

std::string PairPotential::name() const {
    return kind_ == Kind::HardSphere ? "hard-sphere" : "strauss";
}

double hamiltonian(const PairPotential& pot, const PointConfiguration& xs) {
    double h = 0.0;
    const auto& pts = xs.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double e = pot.eval(pts[i], pts[j]);
            if (std::isinf(e)) return e;
            h += e;
        }
    return h;
}

double cross_energy(const PairPotential& pot, const PointConfiguration& xs,
                    const PointConfiguration& ys) {
    double h = 0.0;
    for (const Point& x : xs.points())
        for (const Point& y : ys.points()) {
            double e = pot.eval(x, y);
            if (std::isinf(e)) return e;
            h += e;
        }
    return h;
}

bool is_feasible(const PairPotential& pot, const PointConfiguration& xs) {
    return !std::isinf(hamiltonian(pot, xs));
}

Region Region::from_boxes(const BoxLattice& lat, const BoxSet& s) {
    Region r;
    for (const BoxIndex& v : s) r.rects.push_back(lat.box_bounds(v));
    return r;
}

Region Region::box(Point lo, Point hi) {
    if (lo.size() != hi.size()) throw std::invalid_argument("box bound mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i])) throw std::invalid_argument("empty box");
    Region r;
    r.rects.emplace_back(std::move(lo), std::move(hi));
    return r;
}

double Region::volume() const {
    double vol = 0.0;
    for (const auto& [lo, hi] : rects) {
        double v = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= (hi[i] - lo[i]);
        vol += v;
    }
    return vol;
}

int Region::dim() const {
    return rects.empty() ? 0 : static_cast<int>(rects.front().first.size());
}

namespace {

struct Site {
    Point x;
    double weight;  // panel volume
};

// Midpoint sites over every rect with p panels per axis.
std::vector<Site> make_sites(const Region& region, int p) {
    std::vector<Site> sites;
    int d = region.dim();
    for (const auto& [lo, hi] : region.rects) {
        std::vector<double> h(d);
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            h[i] = (hi[i] - lo[i]) / p;
            w *= h[i];
        }
        std::vector<int> idx(d, 0);
        for (;;) {
            Site s;
            s.x.resize(d);
            for (int i = 0; i < d; ++i) s.x[i] = lo[i] + (idx[i] + 0.5) * h[i];
            s.weight = w;
            sites.push_back(std::move(s));
            int axis = d - 1;
            while (axis >= 0) {
                if (++idx[axis] < p) break;
                idx[axis] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
    }
    return sites;
}

// Sum over non-decreasing index tuples of length k, expanded with the
// multinomial count so the result equals the full k-fold midpoint sum.
// partial = product of panel volumes, pair factors and boundary factors of
// the sites chosen so far; branches with zero weight are pruned.
void tuple_sum(const PairPotential& pot, const std::vector<Site>& sites,
               const std::vector<double>& bweight, int k, std::size_t first,
               int depth, double partial, const std::vector<std::size_t>& chosen,
               double* acc) {
    if (depth == k) {
        // Multiplicity correction: k! / prod(mult!) ... divided by k! later,
        // so accumulate 1/prod(mult!).
        double perm = 1.0;
        std::size_t run = 1;
        for (std::size_t i = 1; i < chosen.size(); ++i) {
            if (chosen[i] == chosen[i - 1]) {
                ++run;
                perm /= static_cast<double>(run);
            } else {
                run = 1;
            }
        }
        *acc += partial * perm;
        return;
    }
    for (std::size_t i = first; i < sites.size(); ++i) {
        double w = partial * sites[i].weight * bweight[i];
        if (w == 0.0) continue;
        for (std::size_t c : chosen) {
            double e = pot.eval(sites[c].x, sites[i].x);
            if (std::isinf(e)) {
                w = 0.0;
                break;
            }
            if (e != 0.0) w *= std::exp(-e);
        }
        if (w == 0.0) continue;
        auto next = chosen;
        next.push_back(i);
        tuple_sum(pot, sites, bweight, k, i, depth + 1, w, next, acc);
    }
}

// k-particle term  (lambda^k) * sum over tuples / (implicit k! handled via
// the multinomial bookkeeping above).
double term_value(const PairPotential& pot, double lambda,
                  const PointConfiguration& boundary, const Region& region,
                  int k, int panels) {
    if (k == 0) return 1.0;
    std::vector<Site> sites = make_sites(region, panels);
    std::vector<double> bweight(sites.size(), 1.0);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        double e = 0.0;
        for (const Point& y : boundary.points()) {
            double f = pot.eval(sites[i].x, y);
            if (std::isinf(f)) {
                e = f;
                break;
            }
            e += f;
        }
        bweight[i] = std::isinf(e) ? 0.0 : (e == 0.0 ? 1.0 : std::exp(-e));
    }
    double acc = 0.0;
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    tuple_sum(pot, sites, bweight, k, 0, 0, 1.0, chosen, &acc);
    return acc * std::pow(lambda, k);
}

// Panels per axis for the k-particle term, shrunk so the enumeration cost
// sites^k / k! stays near the fixed operation budget.
int panels_for(const Region& region, int base_panels, int k, int dim,
               double budget) {
    if (k <= 1) return base_panels;
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    double max_sites = std::pow(budget * fact, 1.0 / k);
    double per_rect = max_sites / std::max<std::size_t>(1, region.rects.size());
    int p = static_cast<int>(std::floor(std::pow(per_rect, 1.0 / dim)));
    return std::max(2, std::min(base_panels, p));
}

// Upper bound on the weight of any k-point configuration, used for the
// truncation tail. Cells of diameter strictly below the range give a lower
// bound on the number of interacting pairs by pigeonhole.
double max_weight_bound(const PairPotential& pot, const Region& region, int k) {
    int d = region.dim();
    double side = pot.range() / std::sqrt(static_cast<double>(d)) * (1.0 - 1e-12);
    double cells = 0.0;
    for (const auto& [lo, hi] : region.rects) {
        double c = 1.0;
        for (int i = 0; i < d; ++i) c *= std::ceil((hi[i] - lo[i]) / side);
        cells += c;
    }
    // A cell cover of the bounding box also covers the region and is
    // tighter when rectangles are adjacent (no double-counted seams).
    Point blo = region.rects.front().first;
    Point bhi = region.rects.front().second;
    for (const auto& [lo, hi] : region.rects)
        for (int i = 0; i < d; ++i) {
            blo[i] = std::min(blo[i], lo[i]);
            bhi[i] = std::max(bhi[i], hi[i]);
        }
    double bcells = 1.0;
    for (int i = 0; i < d; ++i) bcells *= std::ceil((bhi[i] - blo[i]) / side);
    double m = std::max(1.0, std::min(cells, bcells));
    // Spread k points over m cells as evenly as possible; same-cell pairs
    // are all within range.
    double f = std::floor(k / m);
    double q = k - f * m;
    double min_pairs = m * f * (f - 1.0) / 2.0 + q * f;
    if (min_pairs <= 0.0) return 1.0;
    if (pot.kind() == PairPotential::Kind::HardSphere) return 0.0;
    return std::exp(-pot.beta() * min_pairs);
}

}  // namespace

OracleResult partition_oracle(const PairPotential& pot, double lambda,
                              const Region& region,
                              const PointConfiguration& boundary,
                              const QuadratureSpec& spec) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    OracleResult out;
    out.terms.assign(spec.max_particles + 1, 0.0);
    out.terms[0] = 1.0;
    if (region.rects.empty() || lambda == 0.0) {
        out.z = 1.0;
        return out;
    }
    int d = region.dim();
    double quad_err = 0.0;
    for (int k = 1; k <= spec.max_particles; ++k) {
        int p = panels_for(region, spec.panels_per_axis, k, d, spec.op_budget);
        double t = term_value(pot, lambda, boundary, region, k, p);
        double t_half = term_value(pot, lambda, boundary, region, k,
                                   std::max(1, p / 2));
        out.terms[k] = t;
        quad_err += std::abs(t - t_half);
        if (t == 0.0 && t_half == 0.0 &&
            max_weight_bound(pot, region, k) == 0.0)
            break;  // hard-core packing bound reached; later terms vanish
    }
    // Truncation tail: sum_{k > K} lambda^k vol^k / k! * weight bound.
    double tail = 0.0;
    double vol = region.volume();
    double log_term = 0.0;
    for (int k = 1; k <= spec.max_particles; ++k)
        log_term += std::log(lambda * vol) - std::log(static_cast<double>(k));
    for (int k = spec.max_particles + 1; k <= spec.max_particles + 200; ++k) {
        log_term += std::log(lambda * vol) - std::log(static_cast<double>(k));
        double w = max_weight_bound(pot, region, k);
        if (w == 0.0) break;
        double t = std::exp(log_term) * w;
        tail += t;
        if (t < 1e-16 * (1.0 + tail)) break;
    }
    out.z = 0.0;
    for (double t : out.terms) out.z += t;
    out.error_bound = quad_err + tail;
    if (out.error_bound > spec.tolerance)
        throw std::runtime_error(
            "partition_oracle: error bound " + std::to_string(out.error_bound) +
            " exceeds tolerance " + std::to_string(spec.tolerance) +
            "; raise panels_per_axis or max_particles");
    return out;
}

std::vector<double> count_pmf_oracle(const PairPotential& pot, double lambda,
                                     const Region& region,
                                     const PointConfiguration& boundary,
                                     const QuadratureSpec& spec) {
    OracleResult res = partition_oracle(pot, lambda, region, boundary, spec);
    // Include the certified tail bound in the normalization so the final
    // entry carries the truncated mass instead of silently dropping it.
    double z_full = res.z + res.error_bound;
    std::vector<double> pmf(res.terms.size() + 1, 0.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < res.terms.size(); ++k) {
        pmf[k] = res.terms[k] / z_full;
        sum += pmf[k];
    }
    pmf.back() = std::max(0.0, 1.0 - sum);  // truncated tail mass
    return pmf;
}

}  // namespace gibbs

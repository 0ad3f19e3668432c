#pragma once

#include <limits>
#include <string>
#include <vector>

#include "gibbs/geometry.hpp"

namespace gibbs {

// Symmetric pair potential with finite range r measured in Euclidean
// distance. Hard sphere: +infinity below r (distance exactly r is allowed),
// 0 at or beyond. Strauss: beta > 0 below r, 0 at or beyond.
class PairPotential {
public:
    enum class Kind { HardSphere, Strauss };

    static PairPotential hard_sphere(double range);
    static PairPotential strauss(double range, double beta);

    Kind kind() const { return kind_; }
    double range() const { return range_; }
    double beta() const { return beta_; }

    // phi(x, y); +infinity is represented by the IEEE infinity and
    // exp(-inf) evaluates to exactly 0 downstream.
    double eval(const Point& x, const Point& y) const;

    std::string name() const;

private:
    PairPotential(Kind k, double range, double beta)
        : kind_(k), range_(range), beta_(beta) {}

    Kind kind_;
    double range_;
    double beta_;
};

// Sum of phi over unordered pairs inside one configuration. Returns
// +infinity as soon as any pair is infeasible.
double hamiltonian(const PairPotential& pot, const PointConfiguration& xs);

// Sum of phi over pairs with one point in each configuration.
double cross_energy(const PairPotential& pot, const PointConfiguration& xs,
                    const PointConfiguration& ys);

// True when hamiltonian(xs) is finite (no hard-core overlap).
bool is_feasible(const PairPotential& pot, const PointConfiguration& xs);

// Integration region: a disjoint union of axis-aligned boxes. Built either
// from lattice boxes (already clipped) or from an explicit box.
struct Region {
    std::vector<std::pair<Point, Point>> rects;

    static Region from_boxes(const BoxLattice& lat, const BoxSet& s);
    static Region box(Point lo, Point hi);

    double volume() const;
    int dim() const;
};

struct QuadratureSpec {
    int max_particles = 5;      // truncation order of the expansion
    int panels_per_axis = 512;  // midpoint panels per axis for the k=1 term
    double tolerance = 1e-2;    // absolute error target for Z
    double op_budget = 2e7;     // site-tuple visits allowed per term
};

struct OracleResult {
    double z = 1.0;
    double error_bound = 0.0;
    std::vector<double> terms;  // k-th entry = lambda^k/k! * integral term
};

// Brute-force conditional partition function
//   Z = sum_k (lambda^k / k!) Int_{region^k} e^{-H(x) - cross(x, boundary)} dx
// by composite midpoint quadrature, nested per particle coordinate. This is
// the reference oracle: it shares the potential definitions above but none
// of the sampling machinery. Throws when the error target is unreachable
// within the panel budget.
OracleResult partition_oracle(const PairPotential& pot, double lambda,
                              const Region& region,
                              const PointConfiguration& boundary,
                              const QuadratureSpec& spec);

// Distribution of the total point count under the conditional Gibbs measure
// on the region, truncated at spec.max_particles. The last entry absorbs
// the certified upper bound on the truncated tail mass, so the vector sums
// to 1 and stochastically dominates the true tail.
std::vector<double> count_pmf_oracle(const PairPotential& pot, double lambda,
                                     const Region& region,
                                     const PointConfiguration& boundary,
                                     const QuadratureSpec& spec);

}  // namespace gibbs

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gibbs/model.hpp"

using namespace gibbs;

TEST_CASE("pair potential values") {
    PairPotential hs = PairPotential::hard_sphere(1.0);
    CHECK(std::isinf(hs.eval({0.0}, {0.5})));
    CHECK(hs.eval({0.0}, {1.0}) == 0.0);  // distance exactly r is allowed
    CHECK(hs.eval({0.0}, {1.5}) == 0.0);

    PairPotential st = PairPotential::strauss(1.0, std::log(2.0));
    CHECK(st.eval({0.0}, {0.5}) == doctest::Approx(std::log(2.0)));
    CHECK(st.eval({0.0}, {1.0}) == 0.0);
}

TEST_CASE("hamiltonian, cross energy and feasibility") {
    PairPotential hs = PairPotential::hard_sphere(1.0);
    PointConfiguration x;
    x.insert({0.0});
    x.insert({1.2});
    CHECK(hamiltonian(hs, x) == 0.0);
    CHECK(is_feasible(hs, x));
    x.insert({1.9});
    CHECK(std::isinf(hamiltonian(hs, x)));
    CHECK(!is_feasible(hs, x));

    PointConfiguration y;
    y.insert({2.5});
    CHECK(std::isinf(cross_energy(hs, x, y)));  // 1.9 vs 2.5

    PairPotential st = PairPotential::strauss(1.0, 0.7);
    CHECK(hamiltonian(st, x) == doctest::Approx(0.7));  // one close pair
    CHECK(cross_energy(st, x, y) == doctest::Approx(0.7));
}

TEST_CASE("regions") {
    BoxLattice lat(1, 2.0, 1.0);
    BoxSet s;
    s.insert(BoxIndex{{0}});
    s.insert(BoxIndex{{1}});
    Region r = Region::from_boxes(lat, s);
    CHECK(r.volume() == doctest::Approx(2.0));
    CHECK(r.dim() == 1);
    Region b = Region::box({0.0, 0.0}, {1.5, 2.0});
    CHECK(b.volume() == doctest::Approx(3.0));
    CHECK(b.dim() == 2);
}

// Hard spheres on [0,2) with unit range and activity:
//   Z = 1 + 2 + integral over {|x - y| >= 1} = 1 + 2 + 1/2 = 3.5
// so the count distribution is (2/7, 4/7, 1/7).
TEST_CASE("hard-sphere partition function on the unit instance") {
    PairPotential hs = PairPotential::hard_sphere(1.0);
    Region dom = Region::box({0.0}, {2.0});
    QuadratureSpec spec;
    spec.max_particles = 4;
    spec.panels_per_axis = 4096;
    OracleResult res = partition_oracle(hs, 1.0, dom, PointConfiguration(), spec);
    CHECK(res.z == doctest::Approx(3.5).epsilon(2e-3));
    CHECK(res.error_bound < 1e-2);

    std::vector<double> pmf =
        count_pmf_oracle(hs, 1.0, dom, PointConfiguration(), spec);
    CHECK(pmf[0] == doctest::Approx(2.0 / 7.0).epsilon(2e-3));
    CHECK(pmf[1] == doctest::Approx(4.0 / 7.0).epsilon(2e-3));
    CHECK(pmf[2] == doctest::Approx(1.0 / 7.0).epsilon(2e-3));
    double sum = 0.0;
    for (double p : pmf) sum += p;
    CHECK(sum == doctest::Approx(1.0));
}

// Strauss with beta = ln 2 halves the weight of each close pair:
//   Z = 1 + 2 + [1/2 + (1/2)(3/2)] + ... which the quadrature puts near
//   4.630 (computed independently; the k = 3 and 4 terms still matter).
TEST_CASE("strauss partition function on the unit instance") {
    PairPotential st = PairPotential::strauss(1.0, std::log(2.0));
    Region dom = Region::box({0.0}, {2.0});
    QuadratureSpec spec;
    spec.max_particles = 6;
    spec.panels_per_axis = 512;
    spec.tolerance = 2e-2;
    OracleResult res = partition_oracle(st, 1.0, dom, PointConfiguration(), spec);
    CHECK(res.z == doctest::Approx(4.6301).epsilon(4e-3));
}

TEST_CASE("boundary points block the region within range only") {
    PairPotential hs = PairPotential::hard_sphere(1.0);
    Region dom = Region::box({0.0}, {1.0});
    QuadratureSpec spec;
    spec.max_particles = 3;
    spec.panels_per_axis = 4096;

    PointConfiguration far;
    far.insert({2.5});
    OracleResult free_res =
        partition_oracle(hs, 1.0, dom, PointConfiguration(), spec);
    OracleResult far_res = partition_oracle(hs, 1.0, dom, far, spec);
    // Spatial Markov property: a blocker beyond range r changes nothing,
    // bit for bit.
    CHECK(free_res.z == far_res.z);

    PointConfiguration near;
    near.insert({1.3});
    OracleResult near_res = partition_oracle(hs, 1.0, dom, near, spec);
    // Blocker at 1.3 excludes (0.3, 1): Z = 1 + 0.3
    CHECK(near_res.z == doctest::Approx(1.3).epsilon(2e-3));
    CHECK(near_res.z < free_res.z);
}

TEST_CASE("oracle self-consistency under panel halving") {
    PairPotential hs = PairPotential::hard_sphere(1.0);
    Region dom = Region::box({0.0}, {2.0});
    QuadratureSpec coarse;
    coarse.max_particles = 3;
    coarse.panels_per_axis = 1024;
    QuadratureSpec fine = coarse;
    fine.panels_per_axis = 4096;
    double zc = partition_oracle(hs, 1.0, dom, PointConfiguration(), coarse).z;
    double zf = partition_oracle(hs, 1.0, dom, PointConfiguration(), fine).z;
    CHECK(zc == doctest::Approx(zf).epsilon(5e-3));
}

TEST_CASE("oracle error bound is enforced") {
    PairPotential st = PairPotential::strauss(1.0, 0.1);
    Region dom = Region::box({0.0}, {2.0});
    QuadratureSpec tight;
    tight.max_particles = 2;  // heavy truncation at activity 1
    tight.panels_per_axis = 256;
    tight.tolerance = 1e-6;
    CHECK_THROWS(partition_oracle(st, 1.0, dom, PointConfiguration(), tight));
}

TEST_CASE("zero activity gives the empty process") {
    PairPotential hs = PairPotential::hard_sphere(1.0);
    Region dom = Region::box({0.0}, {2.0});
    QuadratureSpec spec;
    std::vector<double> pmf =
        count_pmf_oracle(hs, 0.0, dom, PointConfiguration(), spec);
    CHECK(pmf[0] == doctest::Approx(1.0));
}

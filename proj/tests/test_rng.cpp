#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "gibbs/rng.hpp"

using namespace gibbs;

TEST_CASE("streams replay byte-identically") {
    RngStream a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived streams differ per index and replay") {
    RngStream a = RngStream::derive(7, 0);
    RngStream b = RngStream::derive(7, 1);
    RngStream c = RngStream::derive(7, 0);
    CHECK(a.next_u64() != b.next_u64());
    RngStream a2 = RngStream::derive(7, 0);
    CHECK(a2.next_u64() == c.next_u64());
}

TEST_CASE("uniform01 range and mean") {
    RngStream r(2);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = r.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // mean 1/2, sd of the mean = 1/sqrt(12 n); allow 5 sigma
    CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

TEST_CASE("bernoulli edge probabilities consume no entropy") {
    RngStream r(3);
    std::uint64_t before = RngStream(3).next_u64();
    CHECK(r.bernoulli(0.0) == false);
    CHECK(r.bernoulli(-1.0) == false);
    CHECK(r.bernoulli(1.0) == true);
    CHECK(r.bernoulli(2.0) == true);
    CHECK(r.next_u64() == before);  // stream untouched by the edge cases
}

TEST_CASE("uniform_index is unbiased across a small range") {
    RngStream r(4);
    std::vector<int> counts(3, 0);
    const int n = 300000;
    for (int i = 0; i < n; ++i) counts[r.uniform_index(3)]++;
    for (int c : counts)
        CHECK(std::abs(c - n / 3.0) < 5.0 * std::sqrt(n / 3.0));
    CHECK_THROWS(r.uniform_index(0));
}

TEST_CASE("poisson mean and variance") {
    RngStream r(5);
    const double mean = 2.5;
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double k = static_cast<double>(r.poisson(mean));
        s += k;
        s2 += k * k;
    }
    double m = s / n;
    double var = s2 / n - m * m;
    CHECK(std::abs(m - mean) < 5.0 * std::sqrt(mean / n));
    CHECK(std::abs(var - mean) < 0.1);
    CHECK(r.poisson(0.0) == 0);
    CHECK_THROWS(r.poisson(-1.0));
}

#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gibbs {

// A point in [0,L)^d. Dimension is implied by the vector length.
using Point = std::vector<double>;

// Integer coordinates of a lattice box, compared lexicographically so that
// every container of box indices has a canonical iteration order.
struct BoxIndex {
    std::vector<int> c;

    bool operator==(const BoxIndex& o) const { return c == o.c; }
    bool operator<(const BoxIndex& o) const { return c < o.c; }
};

// Ordered set of boxes. All set-valued operations below return these, so
// iteration order is deterministic across runs and platforms.
using BoxSet = std::set<BoxIndex>;

// Partition of the box [0,L)^d into half-open cubes of side r, with the
// boxes in the last slab along each axis clipped to the domain. The number
// of boxes per axis is ceil(L/r).
class BoxLattice {
public:
    BoxLattice(int dim, double length, double range);

    int dim() const { return d_; }
    double length() const { return L_; }
    double range() const { return r_; }
    int boxes_per_axis() const { return n_; }
    std::size_t box_count() const;

    // Box containing p, via floor(p_i / r). Throws if p lies outside the
    // domain or has the wrong dimension.
    BoxIndex box_of(const Point& p) const;

    bool contains_index(const BoxIndex& v) const;

    // Closed l-infinity ball of radius k around v, intersected with the
    // lattice (boxes at distance exactly k are included).
    BoxSet ball(const BoxIndex& v, int k) const;

    // boundary(S) = (union of ball(v,1) over v in S) minus S.
    BoxSet boundary(const BoxSet& s) const;

    // Q = {v} union (ball(v,ell) minus S).
    BoxSet update_set(const BoxSet& s, const BoxIndex& v, int ell) const;

    // Volume of one box after clipping to [0,L)^d.
    double box_volume(const BoxIndex& v) const;

    // Sum of clipped box volumes over a set.
    double region_volume(const BoxSet& s) const;

    // Clipped bounds [lo, hi) of one box.
    std::pair<Point, Point> box_bounds(const BoxIndex& v) const;

    BoxSet all_boxes() const;

private:
    int d_;
    double L_;
    double r_;
    int n_;
};

// Finite point configuration. Points keep insertion order; equality of
// stored coordinates is exact (no tolerance), and exact duplicates are
// rejected because the model measures are simple.
class PointConfiguration {
public:
    PointConfiguration() = default;

    void insert(Point p);
    // Insert unless an exact duplicate is already present. Conditioning
    // sets assembled from several sources use this; a repeated blocker is
    // idempotent for every weight computed from it.
    void insert_or_ignore(Point p);
    void merge(const PointConfiguration& other);

    std::size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    const std::vector<Point>& points() const { return pts_; }
    const Point& operator[](std::size_t i) const { return pts_[i]; }

    // Points whose containing box lies in s.
    PointConfiguration restrict_to(const BoxLattice& lat, const BoxSet& s) const;

    // Points whose containing box lies outside s.
    PointConfiguration erase_region(const BoxLattice& lat, const BoxSet& s) const;

private:
    std::vector<Point> pts_;
};

double sup_distance(const Point& a, const Point& b);
double euclidean_distance(const Point& a, const Point& b);

}  // namespace gibbs

#include "gibbs/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace gibbs {

BoxLattice::BoxLattice(int dim, double length, double range)
    : d_(dim), L_(length), r_(range) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(length > 0.0)) throw std::invalid_argument("domain length must be positive");
    if (!(range > 0.0)) throw std::invalid_argument("interaction range must be positive");
    n_ = static_cast<int>(std::ceil(length / range));
    // Guard against ceil(L/r) undershooting when L/r is just above an integer.
    while (n_ * range < length) ++n_;
}

std::size_t BoxLattice::box_count() const {
    std::size_t total = 1;
    for (int i = 0; i < d_; ++i) total *= static_cast<std::size_t>(n_);
    return total;
}

BoxIndex BoxLattice::box_of(const Point& p) const {
    if (static_cast<int>(p.size()) != d_)
        throw std::invalid_argument("point dimension mismatch");
    BoxIndex v;
    v.c.resize(d_);
    for (int i = 0; i < d_; ++i) {
        if (!(p[i] >= 0.0) || !(p[i] < L_))
            throw std::out_of_range("point outside the domain");
        int k = static_cast<int>(std::floor(p[i] / r_));
        // floor(p/r) can land one past the last box when p/r rounds up.
        if (k >= n_) k = n_ - 1;
        if (k * r_ > p[i]) --k;
        v.c[i] = k;
    }
    return v;
}

bool BoxLattice::contains_index(const BoxIndex& v) const {
    if (static_cast<int>(v.c.size()) != d_) return false;
    for (int x : v.c)
        if (x < 0 || x >= n_) return false;
    return true;
}

BoxSet BoxLattice::ball(const BoxIndex& v, int k) const {
    if (!contains_index(v)) throw std::invalid_argument("box index outside lattice");
    if (k < 0) throw std::invalid_argument("ball radius must be >= 0");
    BoxSet out;
    BoxIndex cur;
    cur.c.assign(d_, 0);
    // Iterate over the axis-aligned cube of side 2k+1, clipped per axis.
    std::vector<int> lo(d_), hi(d_);
    for (int i = 0; i < d_; ++i) {
        lo[i] = std::max(0, v.c[i] - k);
        hi[i] = std::min(n_ - 1, v.c[i] + k);
        cur.c[i] = lo[i];
    }
    while (true) {
        out.insert(cur);
        int axis = d_ - 1;
        while (axis >= 0) {
            if (cur.c[axis] < hi[axis]) {
                ++cur.c[axis];
                break;
            }
            cur.c[axis] = lo[axis];
            --axis;
        }
        if (axis < 0) break;
    }
    return out;
}

BoxSet BoxLattice::boundary(const BoxSet& s) const {
    BoxSet out;
    for (const BoxIndex& v : s) {
        BoxSet nb = ball(v, 1);
        for (const BoxIndex& w : nb)
            if (s.find(w) == s.end()) out.insert(w);
    }
    return out;
}

BoxSet BoxLattice::update_set(const BoxSet& s, const BoxIndex& v, int ell) const {
    BoxSet q;
    q.insert(v);
    BoxSet b = ball(v, ell);
    for (const BoxIndex& w : b)
        if (s.find(w) == s.end()) q.insert(w);
    return q;
}

double BoxLattice::box_volume(const BoxIndex& v) const {
    if (!contains_index(v)) throw std::invalid_argument("box index outside lattice");
    double vol = 1.0;
    for (int i = 0; i < d_; ++i) {
        double lo = v.c[i] * r_;
        double hi = std::min((v.c[i] + 1) * r_, L_);
        vol *= (hi - lo);
    }
    return vol;
}

double BoxLattice::region_volume(const BoxSet& s) const {
    double vol = 0.0;
    for (const BoxIndex& v : s) vol += box_volume(v);
    return vol;
}

std::pair<Point, Point> BoxLattice::box_bounds(const BoxIndex& v) const {
    if (!contains_index(v)) throw std::invalid_argument("box index outside lattice");
    Point lo(d_), hi(d_);
    for (int i = 0; i < d_; ++i) {
        lo[i] = v.c[i] * r_;
        hi[i] = std::min((v.c[i] + 1) * r_, L_);
    }
    return {lo, hi};
}

BoxSet BoxLattice::all_boxes() const {
    BoxIndex origin;
    origin.c.assign(d_, 0);
    return ball(origin, n_ - 1);
}

void PointConfiguration::insert(Point p) {
    for (const Point& q : pts_)
        if (q == p) throw std::invalid_argument("duplicate point");
    pts_.push_back(std::move(p));
}

void PointConfiguration::insert_or_ignore(Point p) {
    for (const Point& q : pts_)
        if (q == p) return;
    pts_.push_back(std::move(p));
}

void PointConfiguration::merge(const PointConfiguration& other) {
    for (const Point& p : other.pts_) insert(p);
}

PointConfiguration PointConfiguration::restrict_to(const BoxLattice& lat,
                                                   const BoxSet& s) const {
    PointConfiguration out;
    for (const Point& p : pts_)
        if (s.find(lat.box_of(p)) != s.end()) out.pts_.push_back(p);
    return out;
}

PointConfiguration PointConfiguration::erase_region(const BoxLattice& lat,
                                                    const BoxSet& s) const {
    PointConfiguration out;
    for (const Point& p : pts_)
        if (s.find(lat.box_of(p)) == s.end()) out.pts_.push_back(p);
    return out;
}

double sup_distance(const Point& a, const Point& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double euclidean_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace gibbs

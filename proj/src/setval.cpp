#include "ulln/setval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ulln/errors.hpp"

namespace ulln::setval {

namespace {

double cross(Point2 o, Point2 a, Point2 b) noexcept {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// b is not a strict left turn from o->a, relative to the edge lengths.
bool not_left_turn(Point2 o, Point2 a, Point2 b, double tol) noexcept {
    const double scale = norm(a - o) * norm(b - o);
    return cross(o, a, b) <= tol * scale;
}

bool lower_point(Point2 a, Point2 b) noexcept { return a.y < b.y || (a.y == b.y && a.x < b.x); }

ConvexPolygon to_polygon(const Set& s) {
    if (const auto* seg = std::get_if<Segment2>(&s)) {
        return ConvexPolygon::from(*seg);
    }
    if (const auto* poly = std::get_if<ConvexPolygon>(&s)) {
        return *poly;
    }
    throw DomainError("dimension mismatch: interval paired with a planar set");
}

}  // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
        throw DomainError("interval requires lo <= hi");
    }
}

double norm(Point2 p) noexcept { return std::hypot(p.x, p.y); }

ConvexPolygon ConvexPolygon::hull(std::span<const Point2> points, double tol) {
    if (points.empty()) {
        throw DomainError("convex hull of an empty point set");
    }
    std::vector<Point2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(),
              [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });

    double extent = 0.0;
    for (const auto& p : pts) {
        extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
    }
    const double merge = tol * std::max(1.0, extent);
    std::vector<Point2> unique;
    for (const auto& p : pts) {
        if (unique.empty() || norm(p - unique.back()) > merge) {
            unique.push_back(p);
        }
    }

    ConvexPolygon out;
    if (unique.size() <= 2) {
        if (unique.size() == 2 && norm(unique[1] - unique[0]) <= merge) {
            unique.pop_back();
        }
        out.v_ = unique;
    } else {
        std::vector<Point2> h(2 * unique.size());
        std::size_t k = 0;
        for (const auto& p : unique) {
            while (k >= 2 && not_left_turn(h[k - 2], h[k - 1], p, tol)) --k;
            h[k++] = p;
        }
        for (std::size_t i = unique.size() - 1, t = k + 1; i-- > 0;) {
            while (k >= t && not_left_turn(h[k - 2], h[k - 1], unique[i], tol)) --k;
            h[k++] = unique[i];
        }
        h.resize(k - 1);
        out.v_ = std::move(h);
    }
    const auto first = std::min_element(out.v_.begin(), out.v_.end(), lower_point);
    std::rotate(out.v_.begin(), first, out.v_.end());
    return out;
}

ConvexPolygon ConvexPolygon::from(const Segment2& s) {
    const Point2 pts[2] = {s.base, s.base + s.dir};
    return hull(pts);
}

bool ConvexPolygon::contains(Point2 p, double tol) const {
    if (v_.size() == 1) {
        return norm(p - v_[0]) <= tol;
    }
    if (v_.size() == 2) {
        return dist_point(p, v_[0], v_[1]) <= tol;
    }
    for (std::size_t i = 0; i < v_.size(); ++i) {
        const Point2 a = v_[i];
        const Point2 b = v_[(i + 1) % v_.size()];
        if (cross(a, b, p) < -tol * norm(b - a)) {
            return false;
        }
    }
    return true;
}

double ConvexPolygon::perimeter() const {
    if (v_.size() < 2) {
        return 0.0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
        total += norm(v_[(i + 1) % v_.size()] - v_[i]);
    }
    // A segment's closed boundary walks it twice.
    return total;
}

bool ConvexPolygon::approx_equal(const ConvexPolygon& o, double tol) const {
    if (v_.size() != o.v_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (norm(v_[i] - o.v_[i]) > tol) {
            return false;
        }
    }
    return true;
}

double dist_point(double p, const Interval& d) {
    if (d.contains(p)) {
        return 0.0;
    }
    return p < d.lo ? d.lo - p : p - d.hi;
}

double dist_point(Point2 p, const Point2& a, const Point2& b) {
    const Point2 ab = b - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    if (len2 == 0.0) {
        return norm(p - a);
    }
    const Point2 ap = p - a;
    const double t = (ap.x * ab.x + ap.y * ab.y) / len2;
    if (t <= 0.0) {
        return norm(ap);
    }
    if (t >= 1.0) {
        return norm(p - b);
    }
    return norm(p - (a + t * ab));
}

double dist_point(Point2 p, const Segment2& d) { return dist_point(p, d.base, d.base + d.dir); }

double dist_point(Point2 p, const ConvexPolygon& d) {
    const auto& v = d.vertices();
    if (v.size() == 1) {
        return norm(p - v[0]);
    }
    if (v.size() == 2) {
        return dist_point(p, v[0], v[1]);
    }
    if (d.contains(p, 0.0)) {
        return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        best = std::min(best, dist_point(p, v[i], v[(i + 1) % v.size()]));
    }
    return best;
}

double excess(const Interval& c, const Interval& d) {
    return std::max(dist_point(c.lo, d), dist_point(c.hi, d));
}

double excess(const ConvexPolygon& c, const ConvexPolygon& d) {
    double worst = 0.0;
    for (const auto& v : c.vertices()) {
        worst = std::max(worst, dist_point(v, d));
    }
    return worst;
}

double excess(const Set& c, const Set& d) {
    const auto* ci = std::get_if<Interval>(&c);
    const auto* di = std::get_if<Interval>(&d);
    if (ci && di) {
        return excess(*ci, *di);
    }
    if (ci || di) {
        throw DomainError("dimension mismatch: interval paired with a planar set");
    }
    return excess(to_polygon(c), to_polygon(d));
}

double hausdorff(const Interval& c, const Interval& d) { return std::max(excess(c, d), excess(d, c)); }

double hausdorff(const ConvexPolygon& c, const ConvexPolygon& d) {
    return std::max(excess(c, d), excess(d, c));
}

double hausdorff(const Set& c, const Set& d) { return std::max(excess(c, d), excess(d, c)); }

Interval minkowski_average(std::span<const Interval> sets) {
    if (sets.empty()) {
        throw DomainError("Minkowski average of an empty list");
    }
    const double n = static_cast<double>(sets.size());
    double lo = 0.0, hi = 0.0;
    for (const auto& s : sets) {
        lo += s.lo;
        hi += s.hi;
    }
    return Interval(lo / n, hi / n);
}

ConvexPolygon minkowski_average(std::span<const Segment2> sets) {
    if (sets.empty()) {
        throw DomainError("Minkowski average of an empty list");
    }
    const double inv = 1.0 / static_cast<double>(sets.size());
    Point2 start{0.0, 0.0};
    std::vector<Point2> gens;
    for (const auto& s : sets) {
        Point2 base = inv * s.base;
        Point2 g = inv * s.dir;
        // [0,1]g = g + [0,1](-g): orient every generator into the upper half-plane.
        if (g.y < 0.0 || (g.y == 0.0 && g.x < 0.0)) {
            base = base + g;
            g = -1.0 * g;
        }
        start = start + base;
        if (g.x != 0.0 || g.y != 0.0) {
            gens.push_back(g);
        }
    }
    std::sort(gens.begin(), gens.end(),
              [](Point2 a, Point2 b) { return std::atan2(a.y, a.x) < std::atan2(b.y, b.x); });
    std::vector<Point2> walk{start};
    for (const auto& g : gens) walk.push_back(walk.back() + g);
    for (const auto& g : gens) walk.push_back(walk.back() - g);
    return ConvexPolygon::hull(walk);
}

ConvexPolygon minkowski_sum(const ConvexPolygon& a, const ConvexPolygon& b) {
    std::vector<Point2> pts;
    pts.reserve(a.vertices().size() * b.vertices().size());
    for (const auto& p : a.vertices()) {
        for (const auto& q : b.vertices()) {
            pts.push_back(p + q);
        }
    }
    return ConvexPolygon::hull(pts);
}

ConvexPolygon scale(const ConvexPolygon& a, double s) {
    std::vector<Point2> pts;
    for (const auto& p : a.vertices()) pts.push_back(s * p);
    return ConvexPolygon::hull(pts);
}

ConvexPolygon minkowski_average(std::span<const ConvexPolygon> sets) {
    if (sets.empty()) {
        throw DomainError("Minkowski average of an empty list");
    }
    const double inv = 1.0 / static_cast<double>(sets.size());
    ConvexPolygon acc = scale(sets[0], inv);
    for (std::size_t i = 1; i < sets.size(); ++i) {
        acc = minkowski_sum(acc, scale(sets[i], inv));
    }
    return acc;
}

Set minkowski_average(std::span<const Set> sets) {
    if (sets.empty()) {
        throw DomainError("Minkowski average of an empty list");
    }
    if (std::holds_alternative<Interval>(sets[0])) {
        std::vector<Interval> iv;
        for (const auto& s : sets) {
            const auto* i = std::get_if<Interval>(&s);
            if (!i) throw DomainError("Minkowski average of mixed dimensions");
            iv.push_back(*i);
        }
        return minkowski_average(std::span<const Interval>(iv));
    }
    bool all_segments = true;
    for (const auto& s : sets) {
        if (std::holds_alternative<Interval>(s)) throw DomainError("Minkowski average of mixed dimensions");
        all_segments = all_segments && std::holds_alternative<Segment2>(s);
    }
    if (all_segments) {
        std::vector<Segment2> segs;
        for (const auto& s : sets) segs.push_back(std::get<Segment2>(s));
        return minkowski_average(std::span<const Segment2>(segs));
    }
    std::vector<ConvexPolygon> polys;
    for (const auto& s : sets) polys.push_back(to_polygon(s));
    return minkowski_average(std::span<const ConvexPolygon>(polys));
}

}  // namespace ulln::setval

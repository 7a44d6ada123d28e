#pragma once

// Compact convex sets in dimension 1 and 2, with the excess and Hausdorff
// metrics and Minkowski averaging. Subdifferentials in this library are always
// points, intervals, segments, or Minkowski averages of those, so convex
// polygons close the representation and every metric below is exact.

#include <span>
#include <variant>
#include <vector>

namespace ulln::setval {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    /// Throws DomainError unless lo <= hi (infinite endpoints are allowed).
    Interval(double lo, double hi);
    static Interval point(double v) { return Interval(v, v); }

    bool is_singleton() const noexcept { return lo == hi; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const noexcept { return lo <= o.lo && o.hi <= hi; }
    double width() const noexcept { return hi - lo; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
};

double norm(Point2 p) noexcept;

/// {base + t dir : t in [0,1]}; a zero dir is a singleton.
struct Segment2 {
    Point2 base;
    Point2 dir;

    static Segment2 point(Point2 p) { return {p, {0.0, 0.0}}; }
};

/// Vertices in counterclockwise order starting from the lowest (then leftmost)
/// point, with no repeated or collinear vertices. One vertex is a point, two a
/// segment.
class ConvexPolygon {
public:
    /// Convex hull of `points`; collinear and coincident vertices within
    /// `tol` are merged. Throws DomainError on an empty input.
    static ConvexPolygon hull(std::span<const Point2> points, double tol = 1e-12);
    static ConvexPolygon from(const Segment2& s);

    const std::vector<Point2>& vertices() const noexcept { return v_; }
    bool contains(Point2 p, double tol = 1e-12) const;
    double perimeter() const;

    /// Canonical-form equality: same vertex count, vertices within `tol`.
    bool approx_equal(const ConvexPolygon& o, double tol = 1e-12) const;

private:
    std::vector<Point2> v_;
};

using Set = std::variant<Interval, Segment2, ConvexPolygon>;

double dist_point(double p, const Interval& d);
double dist_point(Point2 p, const Point2& a, const Point2& b);  // segment [a,b]
double dist_point(Point2 p, const Segment2& d);
double dist_point(Point2 p, const ConvexPolygon& d);

/// sup_{z in c} dist(z, d); attained at a vertex of c.
double excess(const Interval& c, const Interval& d);
double excess(const ConvexPolygon& c, const ConvexPolygon& d);
double excess(const Set& c, const Set& d);

double hausdorff(const Interval& c, const Interval& d);
double hausdorff(const ConvexPolygon& c, const ConvexPolygon& d);
double hausdorff(const Set& c, const Set& d);

/// (1/n) sum of the sets.
Interval minkowski_average(std::span<const Interval> sets);
/// Zonotope with generators dir_i / n, built by sorting generators by angle.
ConvexPolygon minkowski_average(std::span<const Segment2> sets);
ConvexPolygon minkowski_average(std::span<const ConvexPolygon> sets);
/// All elements must share one alternative (segments and polygons mix freely).
Set minkowski_average(std::span<const Set> sets);

ConvexPolygon minkowski_sum(const ConvexPolygon& a, const ConvexPolygon& b);
ConvexPolygon scale(const ConvexPolygon& a, double s);

}  // namespace ulln::setval

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ulln/errors.hpp"
#include "ulln/setval.hpp"

using namespace ulln;
using namespace ulln::setval;

namespace {

// sup over a grid of c of the grid distance to d, for intervals.
double grid_excess(Interval c, Interval d, int n) {
    double e = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double z = c.lo + (c.hi - c.lo) * i / n;
        double best = INFINITY;
        for (int j = 0; j <= n; ++j) best = std::min(best, std::abs(z - (d.lo + (d.hi - d.lo) * j / n)));
        e = std::max(e, best);
    }
    return e;
}

ConvexPolygon poly(std::vector<Point2> pts) { return ConvexPolygon::hull(pts); }

ConvexPolygon random_polygon(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<int> m(1, 8);
    std::vector<Point2> pts;
    const int n = m(rng);
    for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
    return ConvexPolygon::hull(pts);
}

}  // namespace

TEST_CASE("interval excess and Hausdorff distance") {
    CHECK(excess(Interval(0, 1), Interval(0, 0.5)) == doctest::Approx(0.5));
    CHECK(grid_excess(Interval(0, 1), Interval(0, 0.5), 1000) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(excess(Interval(0, 0.5), Interval(0, 1)) == 0.0);
    CHECK(hausdorff(Interval::point(1), Interval::point(0.5)) == 0.5);
    CHECK(hausdorff(Interval(0, 1), Interval(2, 3)) == 2.0);
    CHECK(grid_excess(Interval(0, 1), Interval(2, 3), 400) == doctest::Approx(2.0));
    CHECK(hausdorff(Interval(-1, 4), Interval(-1, 4)) == 0.0);
    // singleton against interval: the farther endpoint
    CHECK(hausdorff(Interval::point(0.25), Interval(-1, 1)) == 1.25);
    CHECK_THROWS_AS(Interval(1, 0), DomainError);
}

TEST_CASE("interval metrics agree with grids") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> g(-20, 20);
    for (int t = 0; t < 200; ++t) {
        int a = g(rng), b = g(rng), c = g(rng), d = g(rng);
        if (a > b) std::swap(a, b);
        if (c > d) std::swap(c, d);
        const Interval I(a / 4.0, b / 4.0), J(c / 4.0, d / 4.0);
        const double step = std::max(I.width(), J.width()) / 160;
        CHECK(std::abs(excess(I, J) - grid_excess(I, J, 160)) <= step / 2 + 1e-12);
    }
}

TEST_CASE("point distances") {
    CHECK(dist_point(0.0, Interval(0, 1)) == 0.0);
    CHECK(dist_point(Point2{0, 0}, Segment2{{1, 0}, {0, 1}}) == 1.0);
    CHECK(dist_point(Point2{0.5, 0.5}, poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}})) == 0.0);
    CHECK(dist_point(Point2{2, 0.5}, poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}})) == doctest::Approx(1.0));
    CHECK(dist_point(Point2{3, 4}, Segment2::point({0, 0})) == doctest::Approx(5.0));
}

TEST_CASE("planar excess examples") {
    const Set p = Segment2::point({1, 0});
    const Set s = Segment2{{0, 0}, {0, 1}};
    CHECK(excess(p, s) == doctest::Approx(1.0));
    CHECK(excess(s, s) == 0.0);
    CHECK_THROWS_AS(excess(Set(Interval(0, 1)), s), DomainError);
    CHECK_THROWS_AS(hausdorff(s, Set(Interval(0, 1))), DomainError);
}

TEST_CASE("Minkowski averages") {
    const std::vector<Interval> iv{Interval(0, 1), Interval(1, 1)};
    CHECK(minkowski_average(std::span<const Interval>(iv)) == Interval(0.5, 1));

    const std::vector<Segment2> same{{{0, 0}, {1, 2}}, {{0, 0}, {1, 2}}};
    CHECK(minkowski_average(std::span<const Segment2>(same)).approx_equal(ConvexPolygon::from(same[0])));

    const std::vector<Segment2> ortho{{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}};
    const auto sq = minkowski_average(std::span<const Segment2>(ortho));
    CHECK(sq.approx_equal(poly({{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}})));
    CHECK(sq.vertices().front() == Point2{0, 0});

    CHECK_THROWS_AS(minkowski_average(std::span<const Interval>()), DomainError);
    CHECK_THROWS_AS(minkowski_average(std::span<const Segment2>()), DomainError);
}

TEST_CASE("averaging copies of a set returns the set") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        const auto c = random_polygon(rng);
        const std::vector<ConvexPolygon> copies(1 + t % 7, c);
        CHECK(minkowski_average(std::span<const ConvexPolygon>(copies)).approx_equal(c, 1e-9));
    }
}

TEST_CASE("zonotopes from m generators have at most 2m vertices") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 300; ++t) {
        const int m = 1 + t % 9;
        std::vector<Segment2> segs;
        for (int i = 0; i < m; ++i) segs.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
        const auto z = minkowski_average(std::span<const Segment2>(segs));
        CHECK(z.vertices().size() <= static_cast<std::size_t>(2 * m));
        // Zonotope equals the hull of all 2^m vertex sums, scaled.
        std::vector<Point2> corners;
        for (int mask = 0; mask < (1 << m); ++mask) {
            Point2 p{0, 0};
            for (int i = 0; i < m; ++i) p = p + segs[i].base + ((mask >> i) & 1 ? segs[i].dir : Point2{0, 0});
            corners.push_back((1.0 / m) * p);
        }
        CHECK(hausdorff(z, ConvexPolygon::hull(corners)) < 1e-12);
    }
}

TEST_CASE("Hausdorff triangle inequality and identity") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 10000; ++t) {
        const auto a = random_polygon(rng), b = random_polygon(rng), c = random_polygon(rng);
        REQUIRE(hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-9);
    }
    for (int t = 0; t < 200; ++t) {
        const auto a = random_polygon(rng), b = random_polygon(rng);
        CHECK(hausdorff(a, a) == 0.0);
        CHECK((hausdorff(a, b) == 0.0) == a.approx_equal(b, 0.0));
        // same point set, different input order and redundant points
        std::vector<Point2> pts(a.vertices().rbegin(), a.vertices().rend());
        pts.push_back(a.vertices().front());
        const auto again = ConvexPolygon::hull(pts);
        CHECK(again.approx_equal(a, 0.0));
    }
}

TEST_CASE("exact Hausdorff matches boundary sampling on zonotope pairs") {
    const auto r = oracle::polygon_hausdorff_suite(100, 10000, 4242);
    INFO(r.detail);
    CHECK(r.ok);
    CHECK(r.cases == 100);
}

TEST_CASE("hull canonical form") {
    const auto p = poly({{1, 1}, {0, 0}, {1, 0}, {0.5, 0}, {0, 1}, {0.5, 0.5}});
    REQUIRE(p.vertices().size() == 4);
    CHECK(p.vertices()[0] == Point2{0, 0});
    CHECK(p.vertices()[1] == Point2{1, 0});
    CHECK(p.vertices()[2] == Point2{1, 1});
    CHECK(p.perimeter() == doctest::Approx(4.0));
    CHECK(poly({{2, 2}, {2, 2}}).vertices().size() == 1);
    CHECK(poly({{0, 0}, {1, 1}, {2, 2}}).vertices().size() == 2);
    CHECK_THROWS_AS(ConvexPolygon::hull(std::span<const Point2>()), DomainError);
}

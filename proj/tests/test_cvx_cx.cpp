#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ulln/cvx_cx.hpp"
#include "ulln/errors.hpp"

using namespace ulln;
using namespace ulln::cvx;
using dyadic::BitStream;

namespace {

ConvexScenario scenario(std::vector<int> prefix, BitStream::Tail tail = BitStream::Tail::Zeros) {
    return ConvexScenario(BitStream::from_prefix(std::move(prefix), tail));
}

std::vector<int> one_hot(std::uint64_t k) {
    std::vector<int> p(k, 0);
    p[k - 1] = 1;
    return p;
}

double eta(std::uint64_t k) { return 1.0 / (64.0 * static_cast<double>(k * k * k * k)); }

// Random point, biased toward the bump supports where the structure lives.
Point2 random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<std::uint64_t> kk(1, 30);
    Point2 x{u(rng), u(rng)};
    if (rng() % 2 == 0) {
        const std::uint64_t k = kk(rng);
        x.y = 1.0 / static_cast<double>(k) + u(rng) / (8.0 * static_cast<double>(k * k));
        x.x = 2.0 * eta(k) * u(rng);
    }
    return x;
}

}  // namespace

TEST_CASE("smoothstep and bump") {
    CHECK(smoothstep(0.5) == 0.5);
    CHECK(smoothstep(0.0) == 0.0);
    CHECK(smoothstep(1.0) == 1.0);
    CHECK(bump(0.0) == 1.0);
    CHECK(bump(0.5) == 1.0);
    CHECK(bump(1.0) == 0.0);
    CHECK(bump_d1(1.0) == 0.0);
    CHECK(bump(-0.75) == doctest::Approx(0.5));
    double worst1 = 0.0, worst2 = 0.0;
    const int n = 100000;
    for (int i = 0; i <= n; ++i) {
        const double t = -1.0 + 2.0 * i / n;
        worst1 = std::max(worst1, std::abs(bump_d1(t)));
        worst2 = std::max(worst2, std::abs(bump_d2(t)));
    }
    CHECK(worst1 <= 30.0 * (1 + 1e-9));
    CHECK(worst2 <= 30.0 * (1 + 1e-9));
    // derivatives against central differences in the transition band
    for (double t : {0.55, 0.7, 0.8, 0.95, -0.6, -0.9}) {
        const double h = 1e-5;
        CHECK(bump_d1(t) == doctest::Approx((bump(t + h) - bump(t - h)) / (2 * h)).epsilon(1e-6));
        CHECK(bump_d2(t) == doctest::Approx((bump_d1(t + h) - bump_d1(t - h)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("geometry constants") {
    CHECK(CvxGeometry::radius(1) == 0.125);
    CHECK(CvxGeometry::height(2) == eta(2));
    CHECK(CvxGeometry::ball_radius(1) == 1.0 / 2240);
    CHECK(CvxGeometry::center(4) == Point2{0, 0.25});
    for (std::uint64_t k = 1; k <= 10000; ++k) {
        REQUIRE(CvxGeometry::supports_disjoint(k));
        REQUIRE(CvxGeometry::ball_radius(k) < CvxGeometry::radius(k) / 2);
    }
    for (std::uint64_t nu = 1; nu <= 8; ++nu) {
        const Exact K(dyadic::k_bound(nu));
        CHECK(CvxGeometry::delta(nu) == 1 / (2240 * K * K * K * K));
    }
}

TEST_CASE("bump psi") {
    for (std::uint64_t k : {1, 2, 3, 17, 400}) {
        const double kk = static_cast<double>(k);
        CHECK(psi(k, 1.0 / kk) == eta(k));
        const double edge = psi(k, 1.0 / kk + 1.0 / (8 * kk * kk));
        CHECK(edge >= 0.0);
        CHECK(edge <= 1e-30);
        CHECK(psi_d1(k, 1.0 / kk) == 0.0);
    }
    // support ends that are dyadic rationals are hit exactly
    CHECK(psi(1, 1.125) == 0.0);
    CHECK(psi(2, 0.5 + 1.0 / 32) == 0.0);
    CHECK(psi(4, 0.25 - 1.0 / 128) == 0.0);
    const double r3 = CvxGeometry::radius(3);
    CHECK(psi(3, 1.0 / 3 + r3 / 2) == eta(3));
    CHECK(psi_d1(3, 1.0 / 3 + r3 / 2) == 0.0);
    // |psi'| <= 30 r_k and |psi''| <= 30 throughout a support
    for (std::uint64_t k : {1, 5}) {
        const double c = 1.0 / static_cast<double>(k), r = CvxGeometry::radius(k);
        for (int i = 0; i <= 2000; ++i) {
            const double t = c - r + 2 * r * i / 2000;
            REQUIRE(std::abs(psi_d1(k, t)) <= 30 * r * (1 + 1e-9));
            REQUIRE(std::abs(psi_d2(k, t)) <= 30 * (1 + 1e-9));
        }
    }
    CHECK_THROWS_AS(psi(0, 0.5), DomainError);
}

TEST_CASE("g examples") {
    auto s = scenario(one_hot(2));
    CHECK(eval_g(s, {0.3, -1.0}) == 0.3);
    CHECK(eval_g(s, {0.0, 0.5}) == eta(2));
    CHECK(grad_g(s, {0.0, 0.5}) == Point2{1, 0});
    CHECK(eval_g(s, {0.0, 1.0}) == -eta(1));
    const double edge = 0.5 + CvxGeometry::radius(2);
    CHECK(eval_g(s, {0.0, edge}) == 0.0);
    CHECK(active_bump(-0.1, 100) == 0);
    CHECK(active_bump(0.5, 100) == 2);
    CHECK(active_bump(0.6, 100) == 0);
    CHECK_THROWS_AS(active_bump(1e-4, 100), CapacityError);
}

TEST_CASE("f and its subdifferential") {
    auto s = scenario(one_hot(2));
    CHECK(eval_f(s, {0, 0}) == 0.0);
    const auto origin = subdiff_f(s, {0, 0});
    CHECK(origin.base == Point2{0, 0});
    CHECK(origin.dir == Point2{1, 0});

    const Point2 p2 = CvxGeometry::center(2);
    const auto on = subdiff_f(s, p2);
    CHECK(on.dir == Point2{0, 0});
    CHECK(on.base == Point2{1, 0} + 70.0 * p2);

    const Point2 p3 = CvxGeometry::center(3);
    const auto off = subdiff_f(s, p3);
    CHECK(off.dir == Point2{0, 0});
    CHECK(off.base == 70.0 * p3);
}

TEST_CASE("expected and empirical gradients on the balls") {
    CHECK(expected_grad_ball(1, {0, 1}) == Point2{0.5, 70});
    const Point2 e = expected_grad_ball(4, CvxGeometry::center(4));
    CHECK(e.x == 0.5);
    CHECK(e.y == 70.0 / 4);
    CHECK_THROWS_AS(expected_grad_ball(1, {0, 0.9}), DomainError);

    const Point2 y = CvxGeometry::center(2);
    std::vector<ConvexScenario> ones{scenario(one_hot(2)), scenario(one_hot(2))};
    std::vector<ConvexScenario> zeros{scenario({}), scenario({})};
    std::vector<ConvexScenario> mixed{scenario(one_hot(2)), scenario({})};
    const auto single = [](const setval::ConvexPolygon& p) {
        REQUIRE(p.vertices().size() == 1);
        return p.vertices()[0];
    };
    CHECK(single(empirical_avg_subdiff(ones, y, 2)) == Point2{1, 0} + 70.0 * y);
    CHECK(single(empirical_avg_subdiff(zeros, y, 2)) == 70.0 * y);
    CHECK(single(empirical_avg_subdiff(mixed, y, 2)) == Point2{0.5, 0} + 70.0 * y);
    CHECK_THROWS_AS(empirical_avg_subdiff(mixed, {0, 0.6}, 2), DomainError);
}

TEST_CASE("planar gap experiment") {
    int found = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto t = gap_experiment_2d(4, seed);
        const Exact K(52);
        CHECK(*t.perturbed_bound == Exact(1, 2) - Exact(140) / (2240 * K * K * K * K));
        if (t.found) {
            ++found;
            CHECK(*t.gap == Exact(1, 2));
            CHECK(*t.gap_set == doctest::Approx(0.5).epsilon(1e-12));
        } else {
            CHECK_FALSE(t.gap.has_value());
        }
    }
    CHECK(found >= 30);
}

TEST_CASE("plateau cancellation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::uint64_t k = 1; k <= 1000; ++k) {
        ConvexScenario s{BitStream(rng())};
        const double r = CvxGeometry::radius(k);
        for (int i = 0; i < 5; ++i) {
            const double t = 1.0 / static_cast<double>(k) + 0.499 * r * u(rng);
            REQUIRE(grad_g(s, {u(rng), t}).y == 0.0);
        }
    }
}

TEST_CASE("convexity of f") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> lam(0.0, 1.0);
    for (int trial = 0; trial < 100000; ++trial) {
        ConvexScenario s{BitStream(rng() ^ static_cast<std::uint64_t>(trial / 100))};
        Point2 x = random_point(rng), y = random_point(rng);
        if (trial % 3 == 0) {
            // nearby pairs probe curvature
            y = x + Point2{1e-3 * (lam(rng) - 0.5), 1e-3 * (lam(rng) - 0.5)};
        }
        const double l = lam(rng);
        const Point2 z = l * x + (1 - l) * y;
        REQUIRE(eval_f(s, z) <= l * eval_f(s, x) + (1 - l) * eval_f(s, y) + 1e-9);
    }
}

TEST_CASE("Lipschitz and smoothness constants") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100000; ++trial) {
        ConvexScenario s{BitStream(rng())};
        const Point2 x = random_point(rng);
        const double scale = trial % 2 ? 1e-3 : 1.0;
        const Point2 y = x + scale * Point2{u(rng), u(rng)};
        const double d = setval::norm(x - y);
        REQUIRE(std::abs(eval_g(s, x) - eval_g(s, y)) <= 70 * d * (1 + 1e-9));
        REQUIRE(setval::norm(grad_g(s, x) - grad_g(s, y)) <= 70 * d * (1 + 1e-9));
        if (std::abs(x.x) <= 1 && std::abs(x.y) <= 1 && std::abs(y.x) <= 1 && std::abs(y.y) <= 1) {
            REQUIRE(std::abs(eval_f(s, x) - eval_f(s, y)) <= 140 * d * (1 + 1e-9));
        }
    }
}

TEST_CASE("finite differences match the subdifferential") {
    const auto r = oracle::cvx_gradient_suite(2000, 31);
    INFO(r.detail);
    CHECK(r.ok);
}

#pragma once

// Random convex functions on R^2 whose subdifferentials obey no uniform law.
//
//   g(xi, x) = x1 + sum_k psi_k(x2) (2 bit_k(xi) - 1)
//   f(xi, x) = max{g(xi, x), 0} + 35 |x|^2
//
// psi_k is a C^2 bump of height eta_k = r_k^2 supported on B(1/k, r_k),
// r_k = 1/(8k^2), built from the quintic smoothstep. Near p_k = (0, 1/k) the
// sign of g is 2 bit_k(xi) - 1, so the max switches on exactly the samples
// whose k-th bit is one.

#include <cstdint>
#include <span>

#include "ulln/dyadic.hpp"
#include "ulln/exact.hpp"
#include "ulln/gap.hpp"
#include "ulln/setval.hpp"

namespace ulln::cvx {

using setval::Point2;

/// theta(t) = 6t^5 - 15t^4 + 10t^3 and its derivatives.
double smoothstep(double t);
double smoothstep_d1(double t);
double smoothstep_d2(double t);

/// rho: 1 on [-1/2, 1/2], 1 - theta(2|t| - 1) for 1/2 < |t| < 1, 0 beyond.
double bump(double t);
double bump_d1(double t);
double bump_d2(double t);

struct CvxGeometry {
    static constexpr double kC = 70.0;

    /// r_k = 1/(8k^2)
    static double radius(std::uint64_t k);
    /// eta_k = r_k^2 = 1/(64k^4)
    static double height(std::uint64_t k);
    static Point2 center(std::uint64_t k) { return {0.0, 1.0 / static_cast<double>(k)}; }
    /// Delta_k = 1/(32 C k^4) = 1/(2240 k^4)
    static double ball_radius(std::uint64_t k);
    /// delta^nu = 1/(2240 K^4) with K = k_bound(nu).
    static Exact delta(std::uint64_t nu);

    /// supp(psi_k) and supp(psi_{k+1}) are disjoint, checked in integer arithmetic.
    static bool supports_disjoint(std::uint64_t k);
    /// |y - p_k| <= Delta_k, exact.
    static bool in_certified_ball(Point2 y, std::uint64_t k);
};

/// psi_k(t) = eta_k rho((t - 1/k)/r_k). Support and plateau membership are
/// decided exactly, so psi_k' vanishes identically on the plateau.
double psi(std::uint64_t k, double t);
double psi_d1(std::uint64_t k, double t);
double psi_d2(std::uint64_t k, double t);

class ConvexScenario {
public:
    static constexpr std::uint64_t kDefaultMaxIndex = std::uint64_t{1} << 27;

    explicit ConvexScenario(dyadic::BitStream xi, std::uint64_t max_index = kDefaultMaxIndex)
        : xi_(std::move(xi)), max_index_(max_index) {}

    dyadic::BitStream& xi() noexcept { return xi_; }
    std::uint64_t max_index() const noexcept { return max_index_; }

private:
    dyadic::BitStream xi_;
    std::uint64_t max_index_;
};

/// Index of the bump whose open support contains t, or 0 if none.
/// Throws CapacityError if that index exceeds `max_index`.
std::uint64_t active_bump(double t, std::uint64_t max_index);

double eval_g(ConvexScenario& s, Point2 x);
Point2 grad_g(ConvexScenario& s, Point2 x);
double eval_f(ConvexScenario& s, Point2 x);

/// Max rule: {grad g + 70x} if g > 0, {70x} if g < 0, and the segment
/// {t grad g + 70x : t in [0,1]} if g = 0.
setval::Segment2 subdiff_f(ConvexScenario& s, Point2 x);

/// (1/2, 0) + 70y for y in the certified ball around p_k.
Point2 expected_grad_ball(std::uint64_t k, Point2 y);

/// Minkowski average of the singletons {(bit_k(xi^i), 0) + 70y}.
setval::ConvexPolygon empirical_avg_subdiff(std::span<ConvexScenario> samples, Point2 y, std::uint64_t k);

GapTrial gap_experiment_2d(std::uint64_t nu, std::uint64_t seed, const dyadic::Capacity& cap = {});

}  // namespace ulln::cvx

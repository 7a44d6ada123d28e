#pragma once

// Random 1-Lipschitz functions whose Clarke subdifferentials obey no uniform
// law of large numbers.
//
//   g(xi, x) = sum_k 1_{B_k}(x) bit_k(xi),   B_k = (1/k - r_k, 1/k + r_k),  r_k = 1/(4k^2)
//   f(xi, x) = integral_0^{max(x,0)} g(xi, t) dt
//
// On the ball of radius Delta_k = r_k/2 around p_k = 1/k every f(xi, .) is
// affine with slope bit_k(xi), while the expected slope there is 1/2. When all
// nu samples share a one-bit at some k <= k_bound(nu), the empirical gradient
// at p_k is 1 and the gap to the expectation is exactly 1/2.

#include <cstdint>
#include <span>
#include <vector>

#include "ulln/dyadic.hpp"
#include "ulln/exact.hpp"
#include "ulln/gap.hpp"
#include "ulln/setval.hpp"

namespace ulln::lip {

/// Pure constants of the construction.
struct LipGeometry {
    static double center(std::uint64_t k) { return 1.0 / static_cast<double>(k); }
    /// r_k = 1/(4k^2)
    static double radius(std::uint64_t k);
    /// Delta_k = r_k / 2 = 1/(8k^2)
    static double ball_radius(std::uint64_t k);
    /// delta^nu = 1/(8 K^2) with K = k_bound(nu).
    static Exact delta(std::uint64_t nu);

    /// B_k and B_{k+1} are disjoint, checked in integer arithmetic.
    static bool balls_disjoint(std::uint64_t k);
    /// x in the open set B_k, exact.
    static bool in_open_ball(double x, std::uint64_t k);
    /// |y - 1/k| <= Delta_k, exact.
    static bool in_certified_ball(double y, std::uint64_t k);
};

class LipschitzScenario {
public:
    static constexpr double kDefaultTol = 1e-6;
    static constexpr std::uint64_t kDefaultMaxIndex = std::uint64_t{1} << 27;

    /// Throws DomainError unless 1e-7 <= truncation_tol <= 1.
    explicit LipschitzScenario(dyadic::BitStream xi, double truncation_tol = kDefaultTol,
                               std::uint64_t max_index = kDefaultMaxIndex);

    dyadic::BitStream& xi() noexcept { return xi_; }
    double truncation_tol() const noexcept { return tol_; }
    /// K(tau) = ceil(1/tau); the neglected tail is at most 1/(2K) <= tau/2.
    std::uint64_t truncation_index() const noexcept { return trunc_; }
    /// Largest ball index whose bit may be materialized.
    std::uint64_t max_index() const noexcept { return max_index_; }

    /// sum_{j=k}^{K} 2 r_j bit_j, built on first use.
    double full_ball_mass_from(std::uint64_t k);

private:
    dyadic::BitStream xi_;
    double tol_;
    std::uint64_t trunc_;
    std::uint64_t max_index_;
    std::vector<double> suffix_;
};

/// g(xi, x) in {0, 1}.
int eval_g(LipschitzScenario& s, double x);

/// Enclosure [v, v + tail] of f(xi, x) of width at most truncation_tol.
setval::Interval eval_f(LipschitzScenario& s, double x);

struct ClarkeSubdiff {
    setval::Interval set;
    /// Set when x = 0, where the balls accumulate; `set` is then [0,1].
    bool accumulation_point = false;
};

ClarkeSubdiff clarke_subdiff(LipschitzScenario& s, double x);

/// Enclosure of E f(xi, x) = (1/2) sum_k len([0, max(x,0)] cap B_k).
setval::Interval expected_f(double x, double truncation_tol = LipschitzScenario::kDefaultTol);

/// E grad_x f(xi, y) for y in the certified ball around p_k.
double expected_grad_ball(std::uint64_t k);

/// (1/nu) sum_i bit_k(xi^i), the empirical gradient on the certified ball.
/// Throws DomainError if y is outside the ball around p_k.
Exact empirical_avg_grad(std::span<LipschitzScenario> samples, double y, std::uint64_t k);

/// {p_k : k <= k_bound(nu)}, the certified part of D^nu.
std::vector<double> dnu_points(std::uint64_t nu, const dyadic::Capacity& cap = {});

GapTrial gap_experiment(std::uint64_t nu, std::uint64_t seed, const dyadic::Capacity& cap = {});

}  // namespace ulln::lip

#include "ulln/cvx_cx.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ulln/errors.hpp"

namespace ulln::cvx {

namespace {

using dyadic::BitStream;

constexpr std::uint64_t kMaxU64Ratio = std::uint64_t{1} << 29;

// sign(t - num/den) for large index ranges where den may not fit 64 bits.
int compare_big(double t, const Exact& q) {
    const Exact x = to_exact(t);
    return x < q ? -1 : (x > q ? 1 : 0);
}

// sign(t - (a k + b) / (a k^2)) for the support (a = 8) and plateau (a = 16) ends.
int compare_end(double t, std::uint64_t k, std::uint64_t a, int b) {
    if (k < kMaxU64Ratio) {
        const std::uint64_t num = b >= 0 ? a * k + static_cast<std::uint64_t>(b)
                                         : a * k - static_cast<std::uint64_t>(-b);
        return compare_ratio(t, num, a * k * k);
    }
    using boost::multiprecision::cpp_int;
    const cpp_int kk(k);
    return compare_big(t, Exact(cpp_int(a) * kk + b, cpp_int(a) * kk * kk));
}

bool in_open_support(double t, std::uint64_t k) {
    return compare_end(t, k, 8, -1) > 0 && compare_end(t, k, 8, 1) < 0;
}

bool on_plateau(double t, std::uint64_t k) {
    return compare_end(t, k, 16, -1) >= 0 && compare_end(t, k, 16, 1) <= 0;
}

// Scaled offset u = (t - 1/k) / r_k on the transition band 1/2 < |u| < 1.
double band_offset(std::uint64_t k, double t) {
    const double kk = static_cast<double>(k);
    const double u = (t - 1.0 / kk) * 8.0 * kk * kk;
    return std::copysign(std::clamp(std::abs(u), 0.5, 1.0), u);
}

Exact mean_bit(std::span<ConvexScenario> samples, std::uint64_t k) {
    std::int64_t ones = 0;
    for (auto& s : samples) ones += s.xi().bit(k);
    return Exact(ones, static_cast<std::int64_t>(samples.size()));
}

setval::ConvexPolygon average_singletons(std::span<ConvexScenario> samples, Point2 y, std::uint64_t k) {
    std::vector<setval::Segment2> singletons;
    singletons.reserve(samples.size());
    for (auto& s : samples) {
        const Point2 grad{static_cast<double>(s.xi().bit(k)), 0.0};
        singletons.push_back(setval::Segment2::point(grad + CvxGeometry::kC * y));
    }
    return setval::minkowski_average(std::span<const setval::Segment2>(singletons));
}

}  // namespace

double smoothstep(double t) { return t * t * t * (t * (6.0 * t - 15.0) + 10.0); }
double smoothstep_d1(double t) { return 30.0 * t * t * (t - 1.0) * (t - 1.0); }
double smoothstep_d2(double t) { return 60.0 * t * (2.0 * t - 1.0) * (t - 1.0); }

double bump(double t) {
    const double a = std::abs(t);
    if (a >= 1.0) return 0.0;
    if (a <= 0.5) return 1.0;
    // 1 - theta(s) = theta(1 - s), which stays nonnegative near the support edge.
    return smoothstep(2.0 - 2.0 * a);
}

double bump_d1(double t) {
    const double a = std::abs(t);
    if (a >= 1.0 || a <= 0.5) return 0.0;
    return -2.0 * std::copysign(1.0, t) * smoothstep_d1(2.0 * a - 1.0);
}

double bump_d2(double t) {
    const double a = std::abs(t);
    if (a >= 1.0 || a <= 0.5) return 0.0;
    return -4.0 * smoothstep_d2(2.0 * a - 1.0);
}

double CvxGeometry::radius(std::uint64_t k) {
    const double kk = static_cast<double>(k);
    return 1.0 / (8.0 * kk * kk);
}

double CvxGeometry::height(std::uint64_t k) {
    const double r = radius(k);
    return r * r;
}

double CvxGeometry::ball_radius(std::uint64_t k) {
    const double kk = static_cast<double>(k);
    return 1.0 / (32.0 * kC * kk * kk * kk * kk);
}

Exact CvxGeometry::delta(std::uint64_t nu) {
    const Exact K(dyadic::k_bound(nu));
    return Exact(1) / (2240 * K * K * K * K);
}

bool CvxGeometry::supports_disjoint(std::uint64_t k) {
    if (k == 0) {
        throw DomainError("bump index must be >= 1");
    }
    // sup supp psi_{k+1} = (8k+9)/(8(k+1)^2) < inf supp psi_k = (8k-1)/(8k^2)
    using U = unsigned __int128;
    const U kk = k;
    return (8 * kk + 9) * kk * kk < (8 * kk - 1) * (kk + 1) * (kk + 1);
}

bool CvxGeometry::in_certified_ball(Point2 y, std::uint64_t k) {
    if (k == 0) {
        throw DomainError("ball index must be >= 1");
    }
    using boost::multiprecision::cpp_int;
    const cpp_int kk(k);
    const Exact dy = to_exact(y.y) - Exact(cpp_int(1), kk);
    const Exact dx = to_exact(y.x);
    const Exact r(cpp_int(1), 2240 * kk * kk * kk * kk);
    return dx * dx + dy * dy <= r * r;
}

double psi(std::uint64_t k, double t) {
    if (k == 0) throw DomainError("bump index must be >= 1");
    if (!in_open_support(t, k)) return 0.0;
    if (on_plateau(t, k)) return CvxGeometry::height(k);
    return CvxGeometry::height(k) * bump(band_offset(k, t));
}

double psi_d1(std::uint64_t k, double t) {
    if (k == 0) throw DomainError("bump index must be >= 1");
    if (!in_open_support(t, k) || on_plateau(t, k)) return 0.0;
    // eta_k / r_k = r_k
    return CvxGeometry::radius(k) * bump_d1(band_offset(k, t));
}

double psi_d2(std::uint64_t k, double t) {
    if (k == 0) throw DomainError("bump index must be >= 1");
    if (!in_open_support(t, k) || on_plateau(t, k)) return 0.0;
    // eta_k / r_k^2 = 1
    return bump_d2(band_offset(k, t));
}

std::uint64_t active_bump(double t, std::uint64_t max_index) {
    if (!(t > 0.0)) {
        return 0;
    }
    const double inv = 1.0 / t;
    if (!(inv < 0x1p62)) {
        throw CapacityError("x2 = " + std::to_string(t) + " is below the resolvable range");
    }
    const auto m = static_cast<std::uint64_t>(inv);
    for (std::uint64_t c = (m > 1 ? m - 1 : 1); c <= m + 1; ++c) {
        if (in_open_support(t, c)) {
            if (c > max_index) {
                throw CapacityError("active bump index " + std::to_string(c) + " exceeds the cap " +
                                    std::to_string(max_index));
            }
            return c;
        }
    }
    return 0;
}

double eval_g(ConvexScenario& s, Point2 x) {
    const std::uint64_t k = active_bump(x.y, s.max_index());
    if (k == 0) {
        return x.x;
    }
    const double sign = 2.0 * s.xi().bit(k) - 1.0;
    return x.x + sign * psi(k, x.y);
}

Point2 grad_g(ConvexScenario& s, Point2 x) {
    const std::uint64_t k = active_bump(x.y, s.max_index());
    if (k == 0) {
        return {1.0, 0.0};
    }
    const double sign = 2.0 * s.xi().bit(k) - 1.0;
    return {1.0, sign * psi_d1(k, x.y)};
}

double eval_f(ConvexScenario& s, Point2 x) {
    return std::max(eval_g(s, x), 0.0) + 35.0 * (x.x * x.x + x.y * x.y);
}

setval::Segment2 subdiff_f(ConvexScenario& s, Point2 x) {
    const double g = eval_g(s, x);
    const Point2 grad = grad_g(s, x);
    const Point2 quad = CvxGeometry::kC * x;
    if (g > 0.0) {
        return setval::Segment2::point(grad + quad);
    }
    if (g < 0.0) {
        return setval::Segment2::point(quad);
    }
    return {quad, grad};
}

Point2 expected_grad_ball(std::uint64_t k, Point2 y) {
    if (!CvxGeometry::in_certified_ball(y, k)) {
        throw DomainError("y lies outside the certified ball around p_k");
    }
    return Point2{0.5, 0.0} + CvxGeometry::kC * y;
}

setval::ConvexPolygon empirical_avg_subdiff(std::span<ConvexScenario> samples, Point2 y, std::uint64_t k) {
    if (samples.empty()) {
        throw DomainError("empirical average over no samples");
    }
    if (!CvxGeometry::in_certified_ball(y, k)) {
        throw DomainError("y lies outside the certified ball around p_k");
    }
    return average_singletons(samples, y, k);
}

GapTrial gap_experiment_2d(std::uint64_t nu, std::uint64_t seed, const dyadic::Capacity& cap) {
    cap.check_nu(nu);
    GapTrial t;
    t.nu = nu;
    t.seed = seed;
    t.K = dyadic::k_bound(nu);
    t.delta = CvxGeometry::delta(nu);
    t.perturbed_bound = Exact(1, 2) - 140 * t.delta;

    std::vector<BitStream> streams;
    streams.reserve(nu);
    for (std::uint64_t i = 0; i < nu; ++i) {
        streams.emplace_back(dyadic::derive_seed(seed, i));
    }
    const auto k = dyadic::find_joint_one_bit(streams, t.K);
    if (!k) {
        return t;
    }
    t.found = true;
    t.k = *k;

    std::vector<ConvexScenario> scenarios;
    scenarios.reserve(nu);
    for (auto& s : streams) {
        scenarios.emplace_back(std::move(s), std::max<std::uint64_t>(*k, 1));
    }
    // At y = y_hat = p_k the 70y terms coincide, so only the first
    // coordinates differ: 1/2 against the mean bit.
    t.gap = abs(Exact(1, 2) - mean_bit(scenarios, *k));

    // The double nearest p_k may sit outside the certified ball for large k,
    // so the set-metric cross-check evaluates both closed forms there directly.
    const Point2 p = CvxGeometry::center(*k);
    const Point2 expected = Point2{0.5, 0.0} + CvxGeometry::kC * p;
    t.gap_set = setval::hausdorff(setval::ConvexPolygon::from(setval::Segment2::point(expected)),
                                  average_singletons(scenarios, p, *k));
    return t;
}

}  // namespace ulln::cvx

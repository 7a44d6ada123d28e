#include "ulln/lip_cx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ulln/errors.hpp"

namespace ulln::lip {

namespace {

using dyadic::BitStream;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::uint64_t kMaxExactIndex = std::uint64_t{1} << 29;

double lower_end(std::uint64_t k) { return LipGeometry::center(k) - LipGeometry::radius(k); }
double upper_end(std::uint64_t k) { return LipGeometry::center(k) + LipGeometry::radius(k); }

// floor(1/x) for x > 0, or a CapacityError when the balls near x have indices
// beyond what the scenario may materialize.
std::uint64_t reciprocal_index(double x, std::uint64_t max_index) {
    const double inv = 1.0 / x;
    if (!(inv < static_cast<double>(max_index) + 1.0)) {
        throw CapacityError("x = " + std::to_string(x) +
                            " lies among balls with indices above the cap " + std::to_string(max_index));
    }
    return static_cast<std::uint64_t>(inv);
}

// Index c with x in the closure of B_c, together with the position of x.
struct Located {
    std::uint64_t k = 0;  // 0: x lies in no closed ball
    bool interior = false;
};

Located locate(double x, std::uint64_t max_index) {
    const std::uint64_t m = reciprocal_index(x, max_index);
    for (std::uint64_t c = (m > 1 ? m - 1 : 1); c <= m + 1; ++c) {
        if (c > kMaxExactIndex) {
            throw CapacityError("ball index beyond the exact-arithmetic range");
        }
        const std::uint64_t den = 4 * c * c;
        const int lo = compare_ratio(x, 4 * c - 1, den);
        const int hi = compare_ratio(x, 4 * c + 1, den);
        if (lo >= 0 && hi <= 0) {
            if (c > max_index) {
                throw CapacityError("ball index " + std::to_string(c) + " exceeds the cap");
            }
            return {c, lo > 0 && hi < 0};
        }
    }
    return {};
}

}  // namespace

double LipGeometry::radius(std::uint64_t k) {
    const double kk = static_cast<double>(k);
    return 1.0 / (4.0 * kk * kk);
}

double LipGeometry::ball_radius(std::uint64_t k) {
    const double kk = static_cast<double>(k);
    return 1.0 / (8.0 * kk * kk);
}

Exact LipGeometry::delta(std::uint64_t nu) {
    const Exact K(dyadic::k_bound(nu));
    return Exact(1) / (8 * K * K);
}

bool LipGeometry::balls_disjoint(std::uint64_t k) {
    if (k == 0) {
        throw DomainError("ball index must be >= 1");
    }
    // sup B_{k+1} = (4k+5)/(4(k+1)^2) <= inf B_k = (4k-1)/(4k^2)
    using U = unsigned __int128;
    const U kk = k;
    return (4 * kk + 5) * kk * kk <= (4 * kk - 1) * (kk + 1) * (kk + 1);
}

bool LipGeometry::in_open_ball(double x, std::uint64_t k) {
    if (k == 0 || k > kMaxExactIndex) {
        throw DomainError("ball index out of range");
    }
    const std::uint64_t den = 4 * k * k;
    return compare_ratio(x, 4 * k - 1, den) > 0 && compare_ratio(x, 4 * k + 1, den) < 0;
}

bool LipGeometry::in_certified_ball(double y, std::uint64_t k) {
    if (k == 0 || k > kMaxExactIndex) {
        throw DomainError("ball index out of range");
    }
    const std::uint64_t den = 8 * k * k;
    return compare_ratio(y, 8 * k - 1, den) >= 0 && compare_ratio(y, 8 * k + 1, den) <= 0;
}

LipschitzScenario::LipschitzScenario(BitStream xi, double truncation_tol, std::uint64_t max_index)
    : xi_(std::move(xi)), tol_(truncation_tol), trunc_(0), max_index_(max_index) {
    if (!(truncation_tol >= 1e-7 && truncation_tol <= 1.0)) {
        throw DomainError("truncation_tol must lie in [1e-7, 1]");
    }
    trunc_ = static_cast<std::uint64_t>(std::ceil(1.0 / truncation_tol));
    if (trunc_ > max_index_) {
        throw CapacityError("truncation index exceeds the ball-index cap");
    }
}

double LipschitzScenario::full_ball_mass_from(std::uint64_t k) {
    if (suffix_.empty()) {
        suffix_.assign(trunc_ + 2, 0.0);
        // Smallest terms first.
        for (std::uint64_t j = trunc_; j >= 1; --j) {
            suffix_[j] = suffix_[j + 1] + (xi_.bit(j) ? 2.0 * LipGeometry::radius(j) : 0.0);
        }
    }
    return k > trunc_ ? 0.0 : suffix_[k];
}

int eval_g(LipschitzScenario& s, double x) {
    if (x <= 0.0) {
        return 0;
    }
    const Located at = locate(x, s.max_index());
    if (at.k == 0 || !at.interior) {
        return 0;
    }
    return s.xi().bit(at.k);
}

namespace {

// Shared by eval_f and expected_f: `weight(k)` is bit_k or 1/2, and
// `full_from(j)` the weighted full-ball mass over j..K.
template <class Weight, class FullFrom>
setval::Interval truncated_integral(double x, std::uint64_t K, Weight weight, FullFrom full_from) {
    if (x <= 0.0) {
        return setval::Interval(0.0, 0.0);
    }
    const double gamma = 2.0 * static_cast<double>(K + 4) * kEps;
    const double tail = std::min(1.0 / (2.0 * static_cast<double>(K)), x);
    if (x < 1.0 / (2.0 * static_cast<double>(K))) {
        // Every ball up to index K lies to the right of x.
        return setval::Interval(0.0, tail + gamma);
    }
    // First index whose ball sits inside [0, x].
    auto j0 = static_cast<std::uint64_t>(std::max(1.0, std::floor(1.0 / x) - 1.0));
    while (upper_end(j0) > x) ++j0;
    while (j0 > 1 && upper_end(j0 - 1) <= x) --j0;

    double v = full_from(j0);
    const auto m = static_cast<std::uint64_t>(1.0 / x);
    for (std::uint64_t c = (m > 1 ? m - 1 : 1); c <= m + 1; ++c) {
        if (c <= K && lower_end(c) < x && x < upper_end(c)) {
            v += weight(c) * (x - lower_end(c));
        }
    }
    return setval::Interval(std::max(0.0, v - gamma), v + tail + gamma);
}

}  // namespace

setval::Interval eval_f(LipschitzScenario& s, double x) {
    return truncated_integral(
        x, s.truncation_index(), [&](std::uint64_t k) { return static_cast<double>(s.xi().bit(k)); },
        [&](std::uint64_t j) { return s.full_ball_mass_from(j); });
}

ClarkeSubdiff clarke_subdiff(LipschitzScenario& s, double x) {
    if (x == 0.0) {
        return {setval::Interval(0.0, 1.0), true};
    }
    if (x < 0.0) {
        return {setval::Interval::point(0.0), false};
    }
    const Located at = locate(x, s.max_index());
    if (at.k == 0) {
        return {setval::Interval::point(0.0), false};
    }
    const int b = s.xi().bit(at.k);
    if (at.interior) {
        return {setval::Interval::point(b), false};
    }
    // One-sided derivatives b and 0 at an endpoint of B_k.
    return {b ? setval::Interval(0.0, 1.0) : setval::Interval::point(0.0), false};
}

setval::Interval expected_f(double x, double truncation_tol) {
    if (!(truncation_tol >= 1e-7 && truncation_tol <= 1.0)) {
        throw DomainError("truncation_tol must lie in [1e-7, 1]");
    }
    const auto K = static_cast<std::uint64_t>(std::ceil(1.0 / truncation_tol));
    return truncated_integral(
        x, K, [](std::uint64_t) { return 0.5; },
        [K](std::uint64_t j) {
            double acc = 0.0;
            for (std::uint64_t i = K; i >= j; --i) acc += LipGeometry::radius(i);
            return acc;  // (1/2) * sum 2 r_i
        });
}

double expected_grad_ball(std::uint64_t k) {
    if (k == 0) {
        throw DomainError("ball index must be >= 1");
    }
    return 0.5;
}

Exact empirical_avg_grad(std::span<LipschitzScenario> samples, double y, std::uint64_t k) {
    if (samples.empty()) {
        throw DomainError("empirical average over no samples");
    }
    if (k == 0 || !LipGeometry::in_certified_ball(y, k)) {
        throw DomainError("y lies outside the certified ball around p_k");
    }
    std::int64_t ones = 0;
    for (auto& s : samples) {
        ones += s.xi().bit(k);
    }
    return Exact(ones, static_cast<std::int64_t>(samples.size()));
}

std::vector<double> dnu_points(std::uint64_t nu, const dyadic::Capacity& cap) {
    cap.check_nu(nu);
    const std::uint64_t K = dyadic::k_bound(nu);
    std::vector<double> pts;
    pts.reserve(K);
    for (std::uint64_t k = 1; k <= K; ++k) {
        pts.push_back(LipGeometry::center(k));
    }
    return pts;
}

GapTrial gap_experiment(std::uint64_t nu, std::uint64_t seed, const dyadic::Capacity& cap) {
    cap.check_nu(nu);
    GapTrial t;
    t.nu = nu;
    t.seed = seed;
    t.K = dyadic::k_bound(nu);
    t.delta = LipGeometry::delta(nu);

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

    std::vector<LipschitzScenario> scenarios;
    scenarios.reserve(nu);
    for (auto& s : streams) {
        scenarios.emplace_back(std::move(s), 1.0, std::max<std::uint64_t>(*k, 1));
    }
    const double p = LipGeometry::center(*k);
    const Exact avg = empirical_avg_grad(scenarios, p, *k);
    t.gap = abs(to_exact(expected_grad_ball(*k)) - avg);
    t.gap_set = setval::hausdorff(setval::Interval::point(expected_grad_ball(*k)),
                                  setval::Interval::point(avg.convert_to<double>()));
    return t;
}

}  // namespace ulln::lip

#include "ulln/cvx_ulln.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ulln/dyadic.hpp"
#include "ulln/errors.hpp"
#include "ulln/parallel.hpp"

namespace ulln::convex1d {

namespace {

std::size_t upper_index(const std::vector<double>& v, double x) {
    return static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x) - v.begin());
}

std::size_t lower_index(const std::vector<double>& v, double x) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::pair<std::uint64_t, double>> medians_by_nu(const std::vector<ConvergenceRow>& rows,
                                                            std::span<const std::uint64_t> nu_list) {
    std::vector<std::pair<std::uint64_t, double>> out;
    for (const auto nu : nu_list) {
        std::vector<double> gaps;
        for (const auto& r : rows) {
            if (r.nu == nu) gaps.push_back(r.gap);
        }
        out.emplace_back(nu, median_of(std::move(gaps)));
    }
    return out;
}

void check_experiment_lists(std::span<const std::uint64_t> nu_list, std::span<const std::uint64_t> seeds) {
    if (nu_list.empty() || seeds.empty()) {
        throw DomainError("experiment needs at least one nu and one seed");
    }
    for (const auto nu : nu_list) {
        if (nu == 0) throw DomainError("nu must be >= 1");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// PiecewiseLinearConvex

PiecewiseLinearConvex::PiecewiseLinearConvex(std::vector<double> breakpoints, std::vector<double> slopes,
                                             double anchor, double value_at_anchor, double domain_lo,
                                             double domain_hi)
    : lo_(domain_lo), hi_(domain_hi), anchor_(anchor), anchor_value_(value_at_anchor) {
    if (std::isnan(lo_) || std::isnan(hi_) || lo_ > hi_ || lo_ == kInf || hi_ == -kInf) {
        throw DomainError("PWL domain must be a nonempty closed interval");
    }
    if (slopes.size() != breakpoints.size() + 1) {
        throw DomainError("PWL needs exactly one more slope than breakpoints");
    }
    if (!std::isfinite(anchor) || !std::isfinite(value_at_anchor) || anchor < lo_ || anchor > hi_) {
        throw DomainError("PWL anchor must be a finite point of the domain");
    }
    for (std::size_t j = 0; j < slopes.size(); ++j) {
        if (!std::isfinite(slopes[j])) throw DomainError("PWL slopes must be finite");
        if (j > 0 && slopes[j] < slopes[j - 1]) throw DomainError("PWL slopes must be nondecreasing");
    }
    for (std::size_t j = 0; j < breakpoints.size(); ++j) {
        if (!std::isfinite(breakpoints[j]) || !(breakpoints[j] > lo_ && breakpoints[j] < hi_)) {
            throw DomainError("PWL breakpoints must lie inside the domain");
        }
        if (j > 0 && !(breakpoints[j] > breakpoints[j - 1])) {
            throw DomainError("PWL breakpoints must be strictly increasing");
        }
    }

    slopes_.push_back(slopes[0]);
    for (std::size_t j = 0; j < breakpoints.size(); ++j) {
        if (slopes[j + 1] != slopes_.back()) {
            bps_.push_back(breakpoints[j]);
            slopes_.push_back(slopes[j + 1]);
        }
    }

    values_.assign(bps_.size(), 0.0);
    if (!bps_.empty()) {
        const std::size_t idx = upper_index(bps_, anchor_);
        if (idx < bps_.size()) {
            values_[idx] = anchor_value_ + slopes_[idx] * (bps_[idx] - anchor_);
            for (std::size_t j = idx + 1; j < bps_.size(); ++j) {
                values_[j] = values_[j - 1] + slopes_[j] * (bps_[j] - bps_[j - 1]);
            }
        }
        if (idx > 0) {
            values_[idx - 1] = anchor_value_ - slopes_[idx] * (anchor_ - bps_[idx - 1]);
            for (std::size_t j = idx - 1; j-- > 0;) {
                values_[j] = values_[j + 1] - slopes_[j + 1] * (bps_[j + 1] - bps_[j]);
            }
        }
    }
}

PiecewiseLinearConvex PiecewiseLinearConvex::affine(double slope, double intercept) {
    return PiecewiseLinearConvex({}, {slope}, 0.0, intercept);
}

PiecewiseLinearConvex PiecewiseLinearConvex::hinge(double kink, double left, double right) {
    return PiecewiseLinearConvex({kink}, {left, right}, kink, 0.0);
}

double PiecewiseLinearConvex::operator()(double x) const {
    if (!in_domain(x)) {
        return kInf;
    }
    if (bps_.empty()) {
        return anchor_value_ + slopes_[0] * (x - anchor_);
    }
    const std::size_t idx = upper_index(bps_, x);
    if (idx == 0) {
        return values_[0] + slopes_[0] * (x - bps_[0]);
    }
    return values_[idx - 1] + slopes_[idx] * (x - bps_[idx - 1]);
}

double PiecewiseLinearConvex::right_slope(double x) const {
    if (!in_domain(x)) throw DomainError("right_slope outside the domain");
    if (x == hi_) return kInf;
    return slopes_[upper_index(bps_, x)];
}

double PiecewiseLinearConvex::left_slope(double x) const {
    if (!in_domain(x)) throw DomainError("left_slope outside the domain");
    if (x == lo_) return -kInf;
    return slopes_[lower_index(bps_, x)];
}

double PiecewiseLinearConvex::lipschitz() const noexcept {
    return std::max(std::abs(slopes_.front()), std::abs(slopes_.back()));
}

bool operator==(const PiecewiseLinearConvex& a, const PiecewiseLinearConvex& b) {
    if (a.lo_ != b.lo_ || a.hi_ != b.hi_ || a.bps_ != b.bps_ || a.slopes_ != b.slopes_) {
        return false;
    }
    if (!a.bps_.empty()) {
        return a.values_ == b.values_;
    }
    const double ref = std::isfinite(a.lo_) ? a.lo_ : (std::isfinite(a.hi_) ? a.hi_ : 0.0);
    return a(ref) == b(ref);
}

PiecewiseLinearConvex weighted_sum(std::span<const PiecewiseLinearConvex> fs, std::span<const double> w) {
    if (fs.empty() || fs.size() != w.size()) {
        throw DomainError("weighted_sum needs one weight per function");
    }
    double lo = -kInf, hi = kInf;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (!(w[i] >= 0.0)) throw DomainError("weighted_sum weights must be nonnegative");
        lo = std::max(lo, fs[i].domain_lo());
        hi = std::min(hi, fs[i].domain_hi());
    }
    if (lo > hi) {
        throw DomainError("weighted_sum of functions with disjoint domains");
    }

    double initial = 0.0;
    std::vector<std::pair<double, double>> jumps;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (w[i] == 0.0) continue;
        const auto& b = fs[i].breakpoints();
        const auto& s = fs[i].slopes();
        initial += w[i] * s[0];
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double jump = w[i] * (s[j + 1] - s[j]);
            if (b[j] <= lo) {
                initial += jump;
            } else if (b[j] < hi) {
                jumps.emplace_back(b[j], jump);
            }
        }
    }
    std::sort(jumps.begin(), jumps.end());
    std::vector<double> bps;
    std::vector<double> slopes{initial};
    for (std::size_t j = 0; j < jumps.size();) {
        const double at = jumps[j].first;
        double total = 0.0;
        for (; j < jumps.size() && jumps[j].first == at; ++j) total += jumps[j].second;
        bps.push_back(at);
        // Partial sums of nonnegative jumps; guard the order against rounding.
        slopes.push_back(std::max(slopes.back(), slopes.back() + total));
    }

    const double anchor = !bps.empty() ? bps.front() : std::clamp(0.0, lo, hi);
    double value = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (w[i] != 0.0) value += w[i] * fs[i](anchor);
    }
    return PiecewiseLinearConvex(std::move(bps), std::move(slopes), anchor, value, lo, hi);
}

PiecewiseLinearConvex average(std::span<const PiecewiseLinearConvex> fs) {
    const std::vector<double> w(fs.size(), 1.0 / static_cast<double>(fs.size()));
    return weighted_sum(fs, w);
}

double dir_deriv(const PiecewiseLinearConvex& f, double x, int w) {
    if (w == 1) return f.right_slope(x);
    if (w == -1) return -f.left_slope(x);
    throw DomainError("direction must be -1 or +1");
}

Interval subdiff_interval(const PiecewiseLinearConvex& f, double x) {
    return Interval(f.left_slope(x), f.right_slope(x));
}

PiecewiseLinearConvex legendre_transform(const PiecewiseLinearConvex& f) {
    const auto& b = f.breakpoints();
    const auto& d = f.slopes();
    const double lo = f.domain_lo(), hi = f.domain_hi();
    const bool lo_finite = std::isfinite(lo), hi_finite = std::isfinite(hi);

    // Kinks of f (domain ends included) are the slopes of f*; slopes of the
    // bounded pieces of f are the breakpoints of f*.
    std::vector<double> kinks;
    if (lo_finite) kinks.push_back(lo);
    kinks.insert(kinks.end(), b.begin(), b.end());
    if (hi_finite) kinks.push_back(hi);

    if (kinks.empty()) {
        // f(x) = a x + c on the line: f* is -c at a and +infinity elsewhere.
        const double a = d[0];
        return PiecewiseLinearConvex({}, {0.0}, a, -f(0.0), a, a);
    }

    std::vector<double> conj_bps;
    for (std::size_t j = 0; j < d.size(); ++j) {
        const bool left_bounded = j > 0 || lo_finite;
        const bool right_bounded = j + 1 < d.size() || hi_finite;
        if (left_bounded && right_bounded) conj_bps.push_back(d[j]);
    }
    const double conj_lo = lo_finite ? -kInf : d.front();
    const double conj_hi = hi_finite ? kInf : d.back();

    double anchor = 0.0;
    if (!conj_bps.empty()) {
        anchor = conj_bps.front();
    } else if (std::isfinite(conj_lo)) {
        anchor = conj_lo;
    } else if (std::isfinite(conj_hi)) {
        anchor = conj_hi;
    }
    double value = -kInf;
    for (const double v : kinks) value = std::max(value, anchor * v - f(v));

    return PiecewiseLinearConvex(std::move(conj_bps), std::move(kinks), anchor, value, conj_lo, conj_hi);
}

Interval eps_subdiff(const PiecewiseLinearConvex& f, double x, double eps) {
    return eps_subdiff(f, legendre_transform(f), x, eps);
}

Interval eps_subdiff(const PiecewiseLinearConvex& f, const PiecewiseLinearConvex& conj, double x, double eps) {
    if (!(eps >= 0.0)) throw DomainError("eps must be nonnegative");
    if (!f.in_domain(x)) throw DomainError("eps_subdiff outside the domain");

    // s -> f(x) + f*(s) - s x is convex PWL with slope v_j - x on piece j of f*.
    const auto& c = conj.breakpoints();
    const auto& v = conj.slopes();
    std::vector<double> ends;
    ends.reserve(c.size() + 2);
    ends.push_back(conj.domain_lo());
    ends.insert(ends.end(), c.begin(), c.end());
    ends.push_back(conj.domain_hi());
    const std::size_t pieces = v.size();

    std::size_t first_up = pieces;  // first piece with v_j >= x
    for (std::size_t j = 0; j < pieces; ++j) {
        if (v[j] >= x) {
            first_up = j;
            break;
        }
    }
    std::size_t last_down = pieces;  // last piece with v_j <= x, or none
    for (std::size_t j = pieces; j-- > 0;) {
        if (v[j] <= x) {
            last_down = j;
            break;
        }
    }
    double s_lo = first_up < pieces ? ends[first_up] : ends[pieces];
    double s_hi = last_down < pieces ? ends[last_down + 1] : ends[0];

    double budget = eps;
    for (std::size_t j = (first_up < pieces ? first_up : pieces); j-- > 0;) {
        const double rate = x - v[j];
        const double width = ends[j + 1] - ends[j];
        if (rate * width <= budget) {
            budget -= rate * width;
            s_lo = ends[j];
        } else {
            s_lo = ends[j + 1] - budget / rate;
            break;
        }
    }
    budget = eps;
    for (std::size_t j = (last_down < pieces ? last_down + 1 : 0); j < pieces; ++j) {
        const double rate = v[j] - x;
        const double width = ends[j + 1] - ends[j];
        if (rate * width <= budget) {
            budget -= rate * width;
            s_hi = ends[j + 1];
        } else {
            s_hi = ends[j] + budget / rate;
            break;
        }
    }
    return Interval(s_lo, s_hi);
}

// ---------------------------------------------------------------------------
// MonotoneSubdiffMap

MonotoneSubdiffMap::MonotoneSubdiffMap(std::vector<double> breakpoints, std::vector<AffinePiece> pieces)
    : bps_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (pieces_.size() != bps_.size() + 1) {
        throw UnsupportedInput("subdifferential map needs one more piece than breakpoints");
    }
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
        if (!(pieces_[j].slope >= 0.0)) {
            throw UnsupportedInput("subdifferential map piece is not nondecreasing");
        }
    }
    for (std::size_t j = 0; j < bps_.size(); ++j) {
        if (j > 0 && !(bps_[j] > bps_[j - 1])) {
            throw UnsupportedInput("subdifferential map breakpoints must be strictly increasing");
        }
        const double left = pieces_[j].at(bps_[j]);
        const double right = pieces_[j + 1].at(bps_[j]);
        if (left > right + 1e-12 * std::max(1.0, std::abs(right))) {
            throw UnsupportedInput("subdifferential map decreases at a breakpoint");
        }
    }
}

MonotoneSubdiffMap MonotoneSubdiffMap::from_pwl(const PiecewiseLinearConvex& f) {
    if (std::isfinite(f.domain_lo()) || std::isfinite(f.domain_hi())) {
        throw UnsupportedInput("subdifferential map of a function not finite on the whole line");
    }
    std::vector<AffinePiece> pieces;
    for (const double s : f.slopes()) pieces.push_back({s, 0.0});
    return MonotoneSubdiffMap(f.breakpoints(), std::move(pieces));
}

Interval MonotoneSubdiffMap::at(double x) const {
    return Interval(left_selection(x), right_selection(x));
}

double MonotoneSubdiffMap::right_selection(double x) const { return pieces_[upper_index(bps_, x)].at(x); }

double MonotoneSubdiffMap::left_selection(double x) const { return pieces_[lower_index(bps_, x)].at(x); }

MonotoneSubdiffMap MonotoneSubdiffMap::reflected() const {
    std::vector<double> bps;
    for (auto it = bps_.rbegin(); it != bps_.rend(); ++it) bps.push_back(-*it);
    std::vector<AffinePiece> pieces;
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) pieces.push_back({-it->intercept, it->slope});
    return MonotoneSubdiffMap(std::move(bps), std::move(pieces));
}

double sup_hausdorff_gap(const MonotoneSubdiffMap& expected, const PiecewiseLinearConvex& empirical,
                         const Interval& domain) {
    if (empirical.domain_lo() > domain.lo || empirical.domain_hi() < domain.hi) {
        throw UnsupportedInput("empirical function is not finite on the whole domain");
    }
    std::vector<double> points;
    for (const double b : expected.breakpoints()) {
        if (domain.contains(b)) points.push_back(b);
    }
    for (const double b : empirical.breakpoints()) {
        if (domain.contains(b)) points.push_back(b);
    }
    if (std::isfinite(domain.lo)) points.push_back(domain.lo);
    if (std::isfinite(domain.hi)) points.push_back(domain.hi);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    double gap = 0.0;
    for (const double p : points) {
        gap = std::max(gap, setval::hausdorff(expected.at(p), subdiff_interval(empirical, p)));
    }

    // Open pieces between consecutive points: the expected selection is one
    // affine piece, the empirical one a constant; the sup is at the ends.
    std::vector<double> ends;
    if (!std::isfinite(domain.lo)) ends.push_back(-kInf);
    ends.insert(ends.end(), points.begin(), points.end());
    if (!std::isfinite(domain.hi)) ends.push_back(kInf);
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const double a = ends[i], b = ends[i + 1];
        const auto& piece = expected.pieces()[upper_index(expected.breakpoints(), a)];
        const double m = empirical.slopes()[upper_index(empirical.breakpoints(), a)];
        for (const double end : {a, b}) {
            if (std::isfinite(end)) {
                gap = std::max(gap, std::abs(piece.at(end) - m));
            } else if (piece.slope != 0.0) {
                throw UnsupportedInput("expected subdifferential is unbounded on an unbounded piece");
            } else {
                gap = std::max(gap, std::abs(piece.intercept - m));
            }
        }
    }
    return gap;
}

// ---------------------------------------------------------------------------
// Distributions and experiments

ScenarioDistribution ScenarioDistribution::median_example() {
    ScenarioDistribution d;
    d.kind_ = Kind::ContinuousUniform;
    return d;
}

ScenarioDistribution ScenarioDistribution::discrete(std::vector<PiecewiseLinearConvex> atoms,
                                                    std::vector<double> probs) {
    if (atoms.empty() || atoms.size() != probs.size()) {
        throw DomainError("discrete distribution needs one probability per atom");
    }
    double total = 0.0;
    for (const double p : probs) {
        if (!(p > 0.0)) throw DomainError("atom probabilities must be positive");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("atom probabilities must sum to 1");
    }
    for (const auto& a : atoms) {
        if (std::isfinite(a.domain_lo()) || std::isfinite(a.domain_hi())) {
            throw DomainError("scenario functions must be finite on the whole line");
        }
    }
    ScenarioDistribution d;
    d.kind_ = Kind::Discrete;
    d.atoms_ = std::move(atoms);
    d.probs_ = std::move(probs);
    return d;
}

PiecewiseLinearConvex ScenarioDistribution::empirical_average(std::uint64_t nu, std::uint64_t seed) const {
    if (nu == 0) {
        throw DomainError("nu must be >= 1");
    }
    dyadic::SplitMix64 rng(seed);
    if (kind_ == Kind::ContinuousUniform) {
        std::vector<PiecewiseLinearConvex> scenarios;
        scenarios.reserve(nu);
        for (std::uint64_t i = 0; i < nu; ++i) {
            const double xi1 = rng.next_unit();
            scenarios.emplace_back(std::vector<double>{xi1, 2.0}, std::vector<double>{-1.0, 0.0, 1.0}, xi1,
                                   2.0 - xi1);
        }
        return average(scenarios);
    }
    std::vector<double> cdf(probs_.size());
    std::partial_sum(probs_.begin(), probs_.end(), cdf.begin());
    std::vector<double> counts(atoms_.size(), 0.0);
    for (std::uint64_t i = 0; i < nu; ++i) {
        const double u = rng.next_unit() * cdf.back();
        const auto j = std::min<std::size_t>(lower_index(cdf, u), atoms_.size() - 1);
        // lower_bound on u = cdf[j] exactly would pick j; atoms own (cdf[j-1], cdf[j]].
        counts[j] += 1.0;
    }
    for (auto& c : counts) c /= static_cast<double>(nu);
    return weighted_sum(atoms_, counts);
}

std::optional<PiecewiseLinearConvex> ScenarioDistribution::expected_function() const {
    if (kind_ != Kind::Discrete) {
        return std::nullopt;
    }
    return weighted_sum(atoms_, probs_);
}

MonotoneSubdiffMap ScenarioDistribution::expected_subdiff() const {
    if (kind_ == Kind::ContinuousUniform) {
        // E max{x - xi1, 0} = 0, x^2/2, x - 1/2 on x <= 0, [0,1], x >= 1;
        // E max{2 - x, 0} has derivative -1 before 2 and 0 after.
        return MonotoneSubdiffMap({0.0, 1.0, 2.0}, {{-1.0, 0.0}, {-1.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}});
    }
    return MonotoneSubdiffMap::from_pwl(*expected_function());
}

double ScenarioDistribution::expected_lipschitz() const {
    if (kind_ == Kind::ContinuousUniform) {
        return 1.0;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < atoms_.size(); ++j) total += probs_[j] * atoms_[j].lipschitz();
    return total;
}

namespace {

// min{t : M(t) >= level} for the right-continuous selection of M.
double first_reach(const MonotoneSubdiffMap& m, double level) {
    const auto& b = m.breakpoints();
    const auto& p = m.pieces();
    if (p.front().at(b.empty() ? 0.0 : b.front()) >= level && p.front().slope == 0.0) {
        return -kInf;
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double start = j == 0 ? -kInf : b[j - 1];
        const double stop = j < b.size() ? b[j] : kInf;
        if (j > 0 && p[j].at(start) >= level) {
            return start;
        }
        if (p[j].slope > 0.0) {
            const double t = (level - p[j].intercept) / p[j].slope;
            if (t > start && t < stop) {
                return t;
            }
        }
    }
    return kInf;
}

}  // namespace

BracketDiagnostic bracketing_diagnostic(const ScenarioDistribution& dist, double eps, int w) {
    if (!(eps > 0.0)) throw DomainError("bracketing needs eps > 0");
    if (w != 1 && w != -1) throw DomainError("direction must be -1 or +1");

    // For w = -1, t -> f'(x = -t; -1) is the right selection of the reflected map.
    const MonotoneSubdiffMap map = w == 1 ? dist.expected_subdiff() : dist.expected_subdiff().reflected();
    if (map.pieces().front().slope != 0.0 || map.pieces().back().slope != 0.0) {
        throw UnsupportedInput("directional derivatives do not saturate at infinity");
    }
    BracketDiagnostic d;
    d.epsilon = eps;
    d.w = w;
    d.expected_lower = map.pieces().front().intercept;
    d.expected_upper = map.pieces().back().intercept;
    d.bound = 1.0 + 2.0 * dist.expected_lipschitz() / eps;
    if (d.expected_upper <= d.expected_lower) {
        return d;
    }
    const double top = d.expected_upper - eps / 2.0;
    const auto cap = static_cast<std::size_t>(std::ceil(d.bound)) + 2;
    for (std::size_t n = 1;; ++n) {
        const double raw = d.expected_lower + static_cast<double>(n) * eps;
        const double level = std::min(top, raw);
        d.levels.push_back(static_cast<double>(w) * first_reach(map, level));
        if (raw >= top) {
            d.N = n;
            break;
        }
        if (n > cap) {
            throw UnsupportedInput("bracketing levels did not terminate");
        }
    }
    d.bound_holds = static_cast<double>(d.N) <= d.bound;
    return d;
}

ConvergenceReport ulln_experiment(const ScenarioDistribution& dist, std::span<const std::uint64_t> nu_list,
                                  std::span<const std::uint64_t> seeds, const Interval& domain) {
    check_experiment_lists(nu_list, seeds);
    const MonotoneSubdiffMap expected = dist.expected_subdiff();
    const std::size_t n = nu_list.size() * seeds.size();
    ConvergenceReport report;
    report.rows = parallel_map<ConvergenceRow>(n, [&](std::size_t i) {
        const std::uint64_t nu = nu_list[i / seeds.size()];
        const std::uint64_t seed = seeds[i % seeds.size()];
        const auto emp = dist.empirical_average(nu, dyadic::derive_seed(seed, nu));
        return ConvergenceRow{nu, seed, sup_hausdorff_gap(expected, emp, domain), std::nullopt};
    });
    report.medians = medians_by_nu(report.rows, nu_list);
    return report;
}

namespace {

// Hausdorff-Lipschitz modulus of x -> eps-subdifferential of f: shifting x by
// h moves the Fenchel-Young gap by at most 2 L h, and the sublevel set of a
// convex function with minimum 0 moves by at most W (2 L h) / eps.
double eps_modulus(const PiecewiseLinearConvex& f, double eps) {
    const double width = f.slopes().back() - f.slopes().front();
    return 2.0 * f.lipschitz() * width / eps;
}

}  // namespace

ConvergenceReport eps_ulln_experiment(const ScenarioDistribution& dist, double eps,
                                      std::span<const std::uint64_t> nu_list,
                                      std::span<const std::uint64_t> seeds, const Interval& domain,
                                      std::size_t grid_points) {
    if (!(eps > 0.0)) {
        throw DomainError("eps must be positive; eps = 0 is the counterexample regime");
    }
    if (dist.kind() != ScenarioDistribution::Kind::Discrete) {
        throw UnsupportedInput("eps experiments need a discrete distribution");
    }
    if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi) || grid_points < 2) {
        throw UnsupportedInput("eps experiments need a bounded domain and at least two grid points");
    }
    check_experiment_lists(nu_list, seeds);

    const PiecewiseLinearConvex mean = *dist.expected_function();
    const PiecewiseLinearConvex mean_conj = legendre_transform(mean);
    const std::size_t n = nu_list.size() * seeds.size();
    ConvergenceReport report;
    report.rows = parallel_map<ConvergenceRow>(n, [&](std::size_t i) {
        const std::uint64_t nu = nu_list[i / seeds.size()];
        const std::uint64_t seed = seeds[i % seeds.size()];
        const auto emp = dist.empirical_average(nu, dyadic::derive_seed(seed, nu));
        const auto emp_conj = legendre_transform(emp);

        std::vector<double> grid;
        grid.reserve(grid_points + mean.breakpoints().size() + emp.breakpoints().size());
        for (std::size_t g = 0; g < grid_points; ++g) {
            const double t = static_cast<double>(g) / static_cast<double>(grid_points - 1);
            grid.push_back(domain.lo + t * (domain.hi - domain.lo));
        }
        for (const double b : mean.breakpoints()) if (domain.contains(b)) grid.push_back(b);
        for (const double b : emp.breakpoints()) if (domain.contains(b)) grid.push_back(b);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

        double gap = 0.0, spacing = 0.0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double x = grid[g];
            gap = std::max(gap, setval::hausdorff(eps_subdiff(mean, mean_conj, x, eps),
                                                  eps_subdiff(emp, emp_conj, x, eps)));
            if (g > 0) spacing = std::max(spacing, grid[g] - grid[g - 1]);
        }
        const double bound = (eps_modulus(mean, eps) + eps_modulus(emp, eps)) * spacing / 2.0;
        return ConvergenceRow{nu, seed, gap, bound};
    });
    report.medians = medians_by_nu(report.rows, nu_list);
    return report;
}

}  // namespace ulln::convex1d

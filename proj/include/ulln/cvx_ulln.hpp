#pragma once

// Uniform laws that do hold: univariate random convex functions, where the
// empirical subdifferential converges to the subdifferential of the mean in
// Hausdorff distance uniformly over the line, and epsilon-subdifferentials for
// a fixed epsilon > 0.
//
// Scenario functions are convex and piecewise linear, so every subdifferential
// is an interval read off the slope structure, and the supremum over x of the
// Hausdorff gap reduces to a finite maximum over breakpoints and one-sided
// limits.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ulln/setval.hpp"

namespace ulln::convex1d {

using setval::Interval;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Convex piecewise-linear function, +infinity outside [domain_lo, domain_hi].
///
/// Slope slopes[j] holds between breakpoints[j-1] and breakpoints[j]. The
/// stored form is canonical: equal neighbouring slopes are merged.
class PiecewiseLinearConvex {
public:
    /// Throws DomainError unless breakpoints are strictly increasing inside the
    /// domain, slopes.size() == breakpoints.size() + 1, slopes are
    /// nondecreasing, and the anchor lies in the domain.
    PiecewiseLinearConvex(std::vector<double> breakpoints, std::vector<double> slopes, double anchor,
                          double value_at_anchor, double domain_lo = -kInf, double domain_hi = kInf);

    static PiecewiseLinearConvex affine(double slope, double intercept);
    /// Value 0 at `kink`, slope `left` before it and `right` after it.
    static PiecewiseLinearConvex hinge(double kink, double left, double right);

    const std::vector<double>& breakpoints() const noexcept { return bps_; }
    const std::vector<double>& slopes() const noexcept { return slopes_; }
    double domain_lo() const noexcept { return lo_; }
    double domain_hi() const noexcept { return hi_; }
    bool in_domain(double x) const noexcept { return lo_ <= x && x <= hi_; }

    double operator()(double x) const;
    /// f'(x; +1) and -f'(x; -1). Infinite at a finite domain end.
    double right_slope(double x) const;
    double left_slope(double x) const;
    /// Largest |slope|.
    double lipschitz() const noexcept;

    friend bool operator==(const PiecewiseLinearConvex& a, const PiecewiseLinearConvex& b);

private:
    std::vector<double> bps_;
    std::vector<double> slopes_;
    std::vector<double> values_;  // f at each breakpoint
    double lo_;
    double hi_;
    double anchor_;
    double anchor_value_;
};

/// sum_i w_i f_i on the intersection of the domains.
PiecewiseLinearConvex weighted_sum(std::span<const PiecewiseLinearConvex> fs, std::span<const double> w);
PiecewiseLinearConvex average(std::span<const PiecewiseLinearConvex> fs);

/// f'(x; w) for w in {-1, +1}.
double dir_deriv(const PiecewiseLinearConvex& f, double x, int w);

/// [-f'(x; -1), f'(x; +1)].
Interval subdiff_interval(const PiecewiseLinearConvex& f, double x);

/// f*(s) = sup_x (s x - f(x)). Breakpoints of f become slopes of f* and vice
/// versa; the conjugate of a function on the whole line lives on
/// [min slope, max slope].
PiecewiseLinearConvex legendre_transform(const PiecewiseLinearConvex& f);

/// {s : f(x) + f*(s) - s x <= eps}. The walk starts from the exact
/// subdifferential, where the Fenchel-Young gap is zero, so eps = 0 returns
/// subdiff_interval exactly.
Interval eps_subdiff(const PiecewiseLinearConvex& f, double x, double eps);
/// Same, with a precomputed conjugate.
Interval eps_subdiff(const PiecewiseLinearConvex& f, const PiecewiseLinearConvex& conj, double x, double eps);

/// Affine selection a + b x of a subdifferential on one piece.
struct AffinePiece {
    double intercept = 0.0;
    double slope = 0.0;
    double at(double x) const noexcept { return intercept + slope * x; }
};

/// Subdifferential map of a convex function whose derivative is piecewise
/// affine: a singleton a_j + b_j x between breakpoints, and the interval of
/// one-sided limits at a breakpoint.
class MonotoneSubdiffMap {
public:
    /// Throws UnsupportedInput unless every piece is nondecreasing and the
    /// jumps at breakpoints are nonnegative.
    MonotoneSubdiffMap(std::vector<double> breakpoints, std::vector<AffinePiece> pieces);
    static MonotoneSubdiffMap from_pwl(const PiecewiseLinearConvex& f);

    const std::vector<double>& breakpoints() const noexcept { return bps_; }
    const std::vector<AffinePiece>& pieces() const noexcept { return pieces_; }

    Interval at(double x) const;
    /// f'(x; +1), right-continuous.
    double right_selection(double x) const;
    /// -f'(x; -1), left-continuous.
    double left_selection(double x) const;

    /// The map of x -> f(-x) in the same form.
    MonotoneSubdiffMap reflected() const;

private:
    std::vector<double> bps_;
    std::vector<AffinePiece> pieces_;
};

/// sup over x in `domain` of dl(expected(x), subdifferential of `empirical` at x).
/// Exact: both maps are monotone and the empirical one is piecewise constant,
/// so the supremum sits at a breakpoint or a one-sided limit. Throws
/// UnsupportedInput if the expected map is not constant on an unbounded piece
/// of the domain.
double sup_hausdorff_gap(const MonotoneSubdiffMap& expected, const PiecewiseLinearConvex& empirical,
                         const Interval& domain);

/// Distribution of random univariate convex PWL scenario functions.
class ScenarioDistribution {
public:
    enum class Kind { ContinuousUniform, Discrete };

    /// f(xi, x) = max{x - xi1, 0} + max{xi2 - x, 0}, xi1 ~ U[0,1], xi2 = 2.
    static ScenarioDistribution median_example();
    /// Throws DomainError unless probabilities are positive and sum to 1
    /// (within 1e-12) and all atoms are defined on the whole line.
    static ScenarioDistribution discrete(std::vector<PiecewiseLinearConvex> atoms, std::vector<double> probs);

    Kind kind() const noexcept { return kind_; }
    const std::vector<PiecewiseLinearConvex>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& probabilities() const noexcept { return probs_; }

    /// (1/nu) sum of nu iid scenarios drawn from a SplitMix64 stream keyed by seed.
    PiecewiseLinearConvex empirical_average(std::uint64_t nu, std::uint64_t seed) const;
    MonotoneSubdiffMap expected_subdiff() const;
    /// E f, available for discrete distributions only.
    std::optional<PiecewiseLinearConvex> expected_function() const;
    /// E[L(xi)] with L(xi) the Lipschitz constant of f(xi, .).
    double expected_lipschitz() const;

private:
    Kind kind_ = Kind::Discrete;
    std::vector<PiecewiseLinearConvex> atoms_;
    std::vector<double> probs_;
};

/// Levels t_1..t_N of the bracketing construction for the class
/// {f'(., x; w) : x in R}. Levels are reported in x coordinates.
struct BracketDiagnostic {
    double epsilon = 0.0;
    int w = 1;
    std::vector<double> levels;
    std::size_t N = 0;
    double expected_lower = 0.0;  ///< E[l(xi)]
    double expected_upper = 0.0;  ///< E[u(xi)]
    double bound = 0.0;           ///< 1 + 2 E[L] / epsilon
    bool bound_holds = true;
};

BracketDiagnostic bracketing_diagnostic(const ScenarioDistribution& dist, double eps, int w);

struct ConvergenceRow {
    std::uint64_t nu = 0;
    std::uint64_t seed = 0;
    double gap = 0.0;
    /// Lipschitz-in-x bound on the distance between the grid maximum and the
    /// true supremum (epsilon experiments only).
    std::optional<double> grid_error_bound;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    /// (nu, median gap over seeds), in the order of the requested nu list.
    std::vector<std::pair<std::uint64_t, double>> medians;
};

/// For every nu and seed, draw nu scenarios with sub-seed derive_seed(seed, nu)
/// and record sup_x dl(dE f(x), (1/nu) sum d f(xi^i, x)) over `domain`.
ConvergenceReport ulln_experiment(const ScenarioDistribution& dist, std::span<const std::uint64_t> nu_list,
                                  std::span<const std::uint64_t> seeds, const Interval& domain);

/// Same protocol for eps-subdifferentials of E f and of the empirical mean,
/// maximized over a uniform grid of `grid_points` refined by all breakpoints.
/// Throws DomainError for eps <= 0 and UnsupportedInput for non-discrete
/// distributions or an unbounded domain.
ConvergenceReport eps_ulln_experiment(const ScenarioDistribution& dist, double eps,
                                      std::span<const std::uint64_t> nu_list,
                                      std::span<const std::uint64_t> seeds, const Interval& domain,
                                      std::size_t grid_points = 2001);

}  // namespace ulln::convex1d

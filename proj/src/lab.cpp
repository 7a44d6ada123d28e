#include "ulln/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ulln/cvx_cx.hpp"
#include "ulln/cvx_ulln.hpp"
#include "ulln/dyadic.hpp"
#include "ulln/errors.hpp"
#include "ulln/lip_cx.hpp"
#include "ulln/parallel.hpp"

namespace ulln::lab {

namespace {

using json = nlohmann::ordered_json;
using Kind = ConfigIssue::Kind;

constexpr std::uint64_t kMaxTrials = 1'000'000;
constexpr std::uint64_t kMaxSampleSize = std::uint64_t{1} << 22;

bool uses_single_nu(const std::string& e) {
    return e == "gap-lip" || e == "gap-cvx" || e == "gadget-stats" || e == "shatter";
}

bool uses_nu_list(const std::string& e) { return e == "ulln-1d" || e == "eps-ulln"; }

json optional_exact(const std::optional<Exact>& q) { return q ? json(to_string(*q)) : json(nullptr); }

template <class T>
json optional_value(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

Exact median_exact(std::vector<Exact> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

json config_echo(const ExperimentConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    if (uses_single_nu(c.experiment)) {
        j["nu"] = *c.nu;
    } else {
        j["nu_list"] = effective_nu_list(c);
    }
    j["trials"] = effective_trials(c);
    j["seed"] = c.seed;
    j["tol"] = c.tol;
    j["epsilon"] = optional_value(c.epsilon);
    j["format"] = c.format;
    return j;
}

void run_gap(const ExperimentConfig& c, Report& r, bool planar) {
    const std::uint64_t nu = *c.nu;
    const std::uint64_t trials = effective_trials(c);
    const auto results = parallel_map<GapTrial>(trials, [&](std::size_t i) {
        const std::uint64_t sub = dyadic::derive_seed(c.seed, i);
        return planar ? cvx::gap_experiment_2d(nu, sub) : lip::gap_experiment(nu, sub);
    });

    r.columns = {"trial", "seed", "nu", "K", "delta", "found", "k", "gap", "gap_set"};
    if (planar) r.columns.push_back("bound_140_delta");
    std::vector<Exact> gaps;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const GapTrial& t = results[i];
        std::vector<json> row{i, t.seed, t.nu, t.K, to_string(t.delta), t.found, optional_value(t.k),
                              optional_exact(t.gap), optional_value(t.gap_set)};
        if (planar) row.push_back(optional_exact(t.perturbed_bound));
        r.rows.push_back(std::move(row));
        if (t.gap) gaps.push_back(*t.gap);
    }

    json& s = r.summary;
    s["trials"] = trials;
    s["found"] = gaps.size();
    s["success_rate"] = static_cast<double>(gaps.size()) / static_cast<double>(trials);
    s["failure_bound"] = 1.0 / static_cast<double>((nu + 1) * (nu + 1));
    if (gaps.empty()) {
        s["min_gap"] = nullptr;
        s["median_gap"] = nullptr;
    } else {
        s["min_gap"] = to_string(*std::min_element(gaps.begin(), gaps.end()));
        s["median_gap"] = to_string(median_exact(gaps));
    }
    s["all_gaps_one_half"] =
        std::all_of(gaps.begin(), gaps.end(), [](const Exact& g) { return g == Exact(1, 2); });
    if (planar) s["bound_140_delta"] = to_string(Exact(1, 2) - 140 * cvx::CvxGeometry::delta(nu));
}

void run_gadget_stats(const ExperimentConfig& c, Report& r) {
    const std::uint64_t nu = *c.nu;
    const std::uint64_t trials = effective_trials(c);
    dyadic::Capacity{}.check_nu(nu);
    const std::uint64_t K = dyadic::k_bound(nu);
    const auto hits = parallel_map<std::optional<std::uint64_t>>(trials, [&](std::size_t i) {
        const std::uint64_t sub = dyadic::derive_seed(c.seed, i);
        std::vector<dyadic::BitStream> streams;
        streams.reserve(nu);
        for (std::uint64_t j = 0; j < nu; ++j) streams.emplace_back(dyadic::derive_seed(sub, j));
        return dyadic::find_joint_one_bit(streams, K);
    });

    r.columns = {"trial", "seed", "nu", "K", "found", "k"};
    std::uint64_t failures = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        r.rows.push_back({i, dyadic::derive_seed(c.seed, i), nu, K, hits[i].has_value(), optional_value(hits[i])});
        if (!hits[i]) ++failures;
    }
    const double bound = 1.0 / static_cast<double>((nu + 1) * (nu + 1));
    const double fraction = static_cast<double>(failures) / static_cast<double>(trials);
    const double threshold = bound + 3.0 * std::sqrt(bound / static_cast<double>(trials));
    json& s = r.summary;
    s["trials"] = trials;
    s["failures"] = failures;
    s["failure_fraction"] = fraction;
    s["failure_bound"] = bound;
    s["threshold_3sigma"] = threshold;
    s["within_threshold"] = fraction <= threshold;
}

void summarize_convergence(const convex1d::ConvergenceReport& rep, Report& r) {
    json medians = json::array();
    bool non_increasing = true;
    for (std::size_t i = 0; i < rep.medians.size(); ++i) {
        medians.push_back({{"nu", rep.medians[i].first}, {"median_gap", rep.medians[i].second}});
        if (i > 0 && rep.medians[i].second > rep.medians[i - 1].second) non_increasing = false;
    }
    r.summary["medians"] = std::move(medians);
    r.summary["medians_non_increasing"] = non_increasing;
}

std::vector<std::uint64_t> run_seeds(const ExperimentConfig& c) {
    std::vector<std::uint64_t> seeds(effective_trials(c));
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = dyadic::derive_seed(c.seed, i);
    return seeds;
}

void run_ulln_1d(const ExperimentConfig& c, Report& r) {
    const auto nus = effective_nu_list(c);
    const auto seeds = run_seeds(c);
    const auto rep = convex1d::ulln_experiment(convex1d::ScenarioDistribution::median_example(), nus, seeds,
                                               setval::Interval(0.0, 3.0));
    r.columns = {"nu", "seed", "gap"};
    for (const auto& row : rep.rows) r.rows.push_back({row.nu, row.seed, row.gap});
    r.summary["domain"] = {0.0, 3.0};
    summarize_convergence(rep, r);
}

void run_eps_ulln(const ExperimentConfig& c, Report& r) {
    using convex1d::PiecewiseLinearConvex;
    const auto nus = effective_nu_list(c);
    const auto seeds = run_seeds(c);
    const auto dist = convex1d::ScenarioDistribution::discrete(
        {PiecewiseLinearConvex::hinge(0.25, 0.0, 1.0), PiecewiseLinearConvex::hinge(0.75, 0.0, 1.0)},
        {0.5, 0.5});
    const auto rep = convex1d::eps_ulln_experiment(dist, *c.epsilon, nus, seeds, setval::Interval(0.0, 1.0));
    r.columns = {"nu", "seed", "gap", "grid_error_bound"};
    for (const auto& row : rep.rows) r.rows.push_back({row.nu, row.seed, row.gap, optional_value(row.grid_error_bound)});
    r.summary["domain"] = {0.0, 1.0};
    r.summary["epsilon"] = *c.epsilon;
    summarize_convergence(rep, r);
}

void run_shatter(const ExperimentConfig& c, Report& r) {
    const std::uint64_t n = *c.nu;
    const auto witnesses = dyadic::shatter_witness(n);
    const std::uint64_t patterns = std::uint64_t{1} << n;
    r.columns = {"pattern", "k", "realized"};
    bool all = true;
    for (std::uint64_t p = 0; p < patterns; ++p) {
        std::vector<int> pattern(n);
        std::string label;
        for (std::uint64_t i = 0; i < n; ++i) {
            pattern[i] = static_cast<int>((p >> (n - 1 - i)) & 1U);
            label += pattern[i] ? '1' : '0';
        }
        const auto k = dyadic::realizing_index(witnesses, pattern, patterns);
        all = all && k.has_value();
        r.rows.push_back({label, optional_value(k), k.has_value()});
    }
    json w = json::array();
    for (const auto& x : witnesses) w.push_back({{"exact", x.to_string()}, {"value", x.to_double()}});
    r.summary["n"] = n;
    r.summary["witnesses"] = std::move(w);
    r.summary["patterns"] = patterns;
    r.summary["all_realized"] = all;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"gap-lip", "gap-cvx", "ulln-1d", "eps-ulln", "gadget-stats",
                                                "shatter"};
    return names;
}

std::uint64_t effective_trials(const ExperimentConfig& c) {
    if (c.trials) return *c.trials;
    if (c.experiment == "gadget-stats") return 2000;
    if (uses_nu_list(c.experiment)) return 20;
    if (c.experiment == "shatter") return 1;
    return 100;
}

std::vector<std::uint64_t> effective_nu_list(const ExperimentConfig& c) {
    if (!c.nu_list.empty()) return c.nu_list;
    if (c.nu) return {*c.nu};
    if (c.experiment == "eps-ulln") return {100, 1000, 10000};
    return {1U << 6, 1U << 8, 1U << 10, 1U << 12, 1U << 14};
}

std::vector<ConfigIssue> validate(const ExperimentConfig& c) {
    std::vector<ConfigIssue> issues;
    const auto config_error = [&](std::string m) { issues.push_back({Kind::Config, std::move(m)}); };
    const auto& names = experiment_names();
    const bool known = std::find(names.begin(), names.end(), c.experiment) != names.end();
    if (!known) {
        config_error("unknown experiment '" + c.experiment + "'");
    }
    if (c.format != "json" && c.format != "csv") {
        config_error("format must be json or csv, got '" + c.format + "'");
    }
    if (c.trials && *c.trials == 0) {
        config_error("trials must be a positive integer");
    } else if (c.trials && *c.trials > kMaxTrials) {
        issues.push_back({Kind::Capacity, "trials = " + std::to_string(*c.trials) + " exceeds the cap " +
                                              std::to_string(kMaxTrials)});
    }
    if (!(c.tol > 0.0) || !std::isfinite(c.tol)) {
        config_error("tol must be a positive real");
    }
    if (c.epsilon && c.experiment != "eps-ulln") {
        config_error("epsilon applies to eps-ulln only");
    }
    if (!known) {
        return issues;
    }

    if (uses_single_nu(c.experiment)) {
        if (!c.nu_list.empty()) config_error("nu-list is not used by " + c.experiment + "; give nu");
        if (!c.nu) {
            config_error(c.experiment + " requires nu");
        } else if (*c.nu == 0) {
            config_error("nu must be a positive integer");
        } else if (c.experiment == "shatter") {
            try {
                dyadic::Capacity{}.check_shatter(*c.nu);
            } catch (const CapacityError& e) {
                issues.push_back({Kind::Capacity, e.what()});
            }
        } else {
            try {
                dyadic::Capacity{}.check_nu(*c.nu);
            } catch (const CapacityError& e) {
                issues.push_back({Kind::Capacity, std::string("K_bound capacity exceeded: ") + e.what()});
            }
        }
    } else {
        if (c.nu && !c.nu_list.empty()) config_error("give nu or nu-list, not both");
        for (const auto nu : effective_nu_list(c)) {
            if (nu == 0) {
                config_error("nu-list entries must be positive integers");
            } else if (nu > kMaxSampleSize) {
                issues.push_back({Kind::Capacity, "nu = " + std::to_string(nu) + " exceeds the sample cap " +
                                                      std::to_string(kMaxSampleSize)});
            }
        }
    }

    if (c.experiment == "eps-ulln") {
        if (!c.epsilon) {
            config_error("eps-ulln requires epsilon");
        } else if (*c.epsilon == 0.0) {
            config_error("ε must be positive; ε=0 is the counterexample regime");
        } else if (!(*c.epsilon > 0.0) || !std::isfinite(*c.epsilon)) {
            config_error("epsilon must be a finite nonnegative real");
        }
    }
    return issues;
}

Report run(const ExperimentConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.config = config_echo(c);
    if (c.experiment == "gap-lip") {
        run_gap(c, r, false);
    } else if (c.experiment == "gap-cvx") {
        run_gap(c, r, true);
    } else if (c.experiment == "gadget-stats") {
        run_gadget_stats(c, r);
    } else if (c.experiment == "ulln-1d") {
        run_ulln_1d(c, r);
    } else if (c.experiment == "eps-ulln") {
        run_eps_ulln(c, r);
    } else if (c.experiment == "shatter") {
        run_shatter(c, r);
    } else {
        throw DomainError("unknown experiment '" + c.experiment + "'");
    }
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

json to_json(const Report& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["generator"] = dyadic::kGeneratorName;
    j["config"] = r.config;
    j["columns"] = r.columns;
    json rows = json::array();
    for (const auto& row : r.rows) {
        json obj;
        for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = row[i];
        rows.push_back(std::move(obj));
    }
    j["rows"] = std::move(rows);
    j["summary"] = r.summary;
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void write_csv(const Report& r, std::ostream& os) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
}

void write_json(const Report& r, std::ostream& os) { os << to_json(r).dump(2) << '\n'; }

}  // namespace ulln::lab

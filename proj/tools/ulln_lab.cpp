#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ulln/errors.hpp"
#include "ulln/lab.hpp"

namespace lab = ulln::lab;

int main(int argc, char** argv) {
    CLI::App app{"Seeded experiments on uniform laws of large numbers for subdifferentials"};
    lab::ExperimentConfig config;
    std::uint64_t nu = 0, trials = 0;
    double epsilon = 0.0;

    app.add_option("--experiment", config.experiment, "gap-lip | gap-cvx | ulln-1d | eps-ulln | gadget-stats | shatter")
        ->required();
    auto* nu_opt = app.add_option("--nu", nu, "sample size (shatter: number of points)");
    app.add_option("--nu-list", config.nu_list, "sample sizes for ulln-1d and eps-ulln")->delimiter(',');
    auto* trials_opt = app.add_option("--trials", trials, "trials, or seeds per nu");
    app.add_option("--seed", config.seed, "master seed");
    app.add_option("--tol", config.tol, "truncation tolerance");
    auto* eps_opt = app.add_option("--epsilon", epsilon, "epsilon for eps-ulln");
    app.add_option("--out", config.out, "output path (default stdout)");
    app.add_option("--format", config.format, "json | csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? lab::kOk : lab::kConfigError;
    }
    if (*nu_opt) config.nu = nu;
    if (*trials_opt) config.trials = trials;
    if (*eps_opt) config.epsilon = epsilon;

    const auto issues = lab::validate(config);
    if (!issues.empty()) {
        bool config_error = false;
        for (const auto& issue : issues) {
            const bool capacity = issue.kind == lab::ConfigIssue::Kind::Capacity;
            config_error = config_error || !capacity;
            std::cerr << (capacity ? "capacity error: " : "config error: ") << issue.message << '\n';
        }
        return config_error ? lab::kConfigError : lab::kCapacityError;
    }

    std::ofstream file;
    if (!config.out.empty()) {
        file.open(config.out, std::ios::binary);
        if (!file) {
            std::cerr << "cannot write " << config.out << '\n';
            return lab::kIoError;
        }
    }
    std::ostream& os = config.out.empty() ? std::cout : file;

    lab::Report report;
    try {
        report = lab::run(config);
    } catch (const ulln::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return lab::kCapacityError;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return lab::kConfigError;
    }

    if (config.format == "csv") {
        lab::write_csv(report, os);
    } else {
        lab::write_json(report, os);
    }
    os.flush();
    if (!os) {
        std::cerr << "write failed\n";
        return lab::kIoError;
    }
    return lab::kOk;
}

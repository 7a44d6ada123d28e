#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "ulln/lab.hpp"

using namespace ulln::lab;
using nlohmann::ordered_json;

namespace {

ExperimentConfig config(std::string experiment) {
    ExperimentConfig c;
    c.experiment = std::move(experiment);
    return c;
}

bool has_issue(const std::vector<ConfigIssue>& issues, ConfigIssue::Kind kind, const std::string& text) {
    for (const auto& i : issues) {
        if (i.kind == kind && i.message.find(text) != std::string::npos) return true;
    }
    return false;
}

std::string without_wall_time(const Report& r) {
    auto j = to_json(r);
    j.erase("wall_time_s");
    return j.dump();
}

int tool(const std::string& args) {
    const std::string cmd = std::string(ULLN_LAB_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        out.push_back(cells);
    }
    return out;
}

}  // namespace

TEST_CASE("validation") {
    auto shatter = config("shatter");
    CHECK_FALSE(validate(shatter).empty());  // n comes from --nu
    shatter.nu = 3;
    CHECK(validate(shatter).empty());
    auto gap = config("gap-lip");
    gap.nu = 8;
    CHECK(validate(gap).empty());

    auto eps = config("eps-ulln");
    eps.epsilon = 0.0;
    CHECK(has_issue(validate(eps), ConfigIssue::Kind::Config, "counterexample regime"));
    eps.epsilon = 0.1;
    CHECK(validate(eps).empty());

    auto big = config("gap-cvx");
    big.nu = 40;
    CHECK(has_issue(validate(big), ConfigIssue::Kind::Capacity, "K_bound"));

    auto bad = config("nonsense");
    CHECK_FALSE(validate(bad).empty());

    // all violations are reported
    auto many = config("gap-lip");
    many.nu = 8;
    many.tol = -1.0;
    many.format = "xml";
    many.epsilon = 0.5;
    CHECK(validate(many).size() >= 3);
}

TEST_CASE("reports are deterministic") {
    for (const char* name : {"gap-lip", "gap-cvx", "gadget-stats", "shatter"}) {
        auto c = config(name);
        c.nu = 3;
        c.trials = 20;
        c.seed = 11;
        REQUIRE(validate(c).empty());
        CHECK(without_wall_time(run(c)) == without_wall_time(run(c)));
    }
    auto u = config("ulln-1d");
    u.nu_list = {64, 256};
    u.trials = 4;
    CHECK(without_wall_time(run(u)) == without_wall_time(run(u)));
    auto e = config("eps-ulln");
    e.epsilon = 0.1;
    e.nu_list = {100, 1000};
    e.trials = 4;
    CHECK(without_wall_time(run(e)) == without_wall_time(run(e)));

    auto other = config("gap-lip");
    other.nu = 3;
    other.trials = 20;
    other.seed = 12;
    auto same = other;
    same.seed = 11;
    CHECK(without_wall_time(run(other)) != without_wall_time(run(same)));
}

TEST_CASE("csv and json carry the same rows") {
    for (const char* name : {"gap-lip", "gap-cvx", "ulln-1d", "shatter"}) {
        auto c = config(name);
        if (std::string(name) == "ulln-1d") {
            c.nu_list = {64, 128};
            c.trials = 3;
        } else {
            c.nu = 3;
            c.trials = 10;
        }
        const Report r = run(c);
        std::ostringstream csv;
        write_csv(r, csv);
        const auto table = parse_csv(csv.str());
        REQUIRE(table.size() == r.rows.size() + 1);
        CHECK(table[0] == r.columns);

        const auto doc = to_json(r);
        REQUIRE(doc["rows"].size() == r.rows.size());
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            REQUIRE(table[i + 1].size() == r.columns.size());
            for (std::size_t j = 0; j < r.columns.size(); ++j) {
                CHECK(table[i + 1][j] == csv_cell(doc["rows"][i][r.columns[j]]));
            }
        }
    }
}

TEST_CASE("report shape") {
    auto c = config("gap-lip");
    c.nu = 4;
    c.trials = 30;
    c.seed = 7;
    const auto doc = to_json(run(c));
    CHECK(doc["schema_version"] == kSchemaVersion);
    CHECK(doc["config"]["experiment"] == "gap-lip");
    const double rate = doc["summary"]["success_rate"];
    CHECK(rate >= 0.0);
    CHECK(rate <= 1.0);
    for (const auto& row : doc["rows"]) {
        if (row["found"] == true) CHECK(row["gap"] == "1/2");
    }
    std::vector<std::string> keys;
    for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"schema_version", "generator", "config", "columns", "rows", "summary",
                                           "wall_time_s"});
}

TEST_CASE("shatter table") {
    auto c = config("shatter");
    c.nu = 3;
    const auto doc = to_json(run(c));
    REQUIRE(doc["rows"].size() == 8);
    for (const auto& row : doc["rows"]) {
        CHECK(row["realized"] == true);
        CHECK(row["k"].get<int>() <= 8);
    }
    CHECK(doc["summary"]["witnesses"].size() == 3);
}

TEST_CASE("tool exit codes") {
    const auto dir = std::filesystem::temp_directory_path() / "ulln_lab_test";
    std::filesystem::create_directories(dir);
    const auto out = (dir / "r.json").string();
    CHECK(tool("--experiment shatter --nu 2 --out " + out) == kOk);
    std::ifstream in(out);
    CHECK(ordered_json::parse(in)["schema_version"] == kSchemaVersion);

    CHECK(tool("--experiment nonsense") == kConfigError);
    CHECK(tool("--experiment eps-ulln --epsilon 0") == kConfigError);
    CHECK(tool("--experiment gap-lip --nu 40") == kCapacityError);
    CHECK(tool("--experiment shatter --nu 2 --out /nonexistent/dir/r.json") == kIoError);
    CHECK(tool("--experiment shatter --bogus-flag") == kConfigError);
    std::filesystem::remove_all(dir);
}

/// End-to-end tests that drive the installed `qah` binary through /bin/sh.
/// QAH_CLI_PATH and QAH_FIXTURES_DIR come from the build system.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "qah_cli_work";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string quoted(const fs::path& path) { return "\"" + path.string() + "\""; }

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(static_cast<bool>(in), "cannot read " << path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE_MESSAGE(static_cast<bool>(out), "cannot write " << path.string());
    out << content;
}

std::size_t line_count(const std::string& text) {
    std::size_t count = 0;
    for (char c : text) {
        if (c == '\n') ++count;
    }
    return count;
}

std::size_t count_occurrences(const std::string& text, std::string_view needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
    std::string error;
};

/// Runs `qah <args>` with stdout/stderr captured to files in the work dir.
CommandResult run_cli(const std::string& args) {
    const fs::path out_path = work_dir() / "cmd_stdout.txt";
    const fs::path err_path = work_dir() / "cmd_stderr.txt";
    const std::string command = std::string("\"") + QAH_CLI_PATH + "\" " + args + " > " +
                                quoted(out_path) + " 2> " + quoted(err_path);
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), slurp(out_path), slurp(err_path)};
}

/// One ramping answerer plus one single-comment user: the two-point feature
/// cloud clamps K to 2, which cannot be named, so analyze must refuse.
std::string ramp_csv() {
    std::string csv = "user_id,timestamp,kind\n";
    for (int m = 1; m <= 12; ++m) {
        for (int i = 0; i < m; ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "u1,2014-%02d-%02dT12:00:00,answer\n", m, 10 + i % 15);
            csv += buf;
        }
    }
    csv += "u2,2014-01-20T08:00:00,comment\n";
    return csv;
}

}  // namespace

TEST_CASE("synth generates a deterministic labeled instance") {
    const fs::path events_a = work_dir() / "events_a.csv";
    const fs::path labels_a = work_dir() / "labels_a.csv";
    const CommandResult first =
        run_cli("synth --events " + quoted(events_a) + " --labels " + quoted(labels_a));
    CHECK(first.exit_code == 0);
    CHECK(first.error.find("generated 1000 users") != std::string::npos);

    const fs::path events_b = work_dir() / "events_b.csv";
    const fs::path labels_b = work_dir() / "labels_b.csv";
    const CommandResult second =
        run_cli("synth --events " + quoted(events_b) + " --labels " + quoted(labels_b));
    CHECK(second.exit_code == 0);
    CHECK(slurp(events_a) == slurp(events_b));
    CHECK(slurp(labels_a) == slurp(labels_b));

    const std::string labels = slurp(labels_a);
    CHECK(labels.starts_with("user_id,archetype\n"));
    CHECK(line_count(labels) == 1001);
    CHECK(slurp(events_a).starts_with("user_id,timestamp,kind\n"));
}

TEST_CASE("synth honors a custom mixture spec") {
    const fs::path spec = work_dir() / "small_spec.txt";
    write_file(spec,
               "months = 60\n"
               "seed = 7\n"
               "nonrecurring.users = 5\n"
               "sporadic.users = 4\n"
               "frequent.users = 2\n"
               "permanent.users = 1\n");
    const fs::path events = work_dir() / "small_events.csv";
    const fs::path labels = work_dir() / "small_labels.csv";
    const CommandResult result = run_cli("synth --spec " + quoted(spec) + " --events " +
                                         quoted(events) + " --labels " + quoted(labels));
    CHECK(result.exit_code == 0);
    CHECK(result.error.find("generated 12 users") != std::string::npos);
    CHECK(slurp(labels) ==
          "user_id,archetype\n"
          "u01,NonRecurring\n"
          "u02,NonRecurring\n"
          "u03,NonRecurring\n"
          "u04,NonRecurring\n"
          "u05,NonRecurring\n"
          "u06,Sporadic\n"
          "u07,Sporadic\n"
          "u08,Sporadic\n"
          "u09,Sporadic\n"
          "u10,Frequent\n"
          "u11,Frequent\n"
          "u12,Permanent\n");
}

TEST_CASE("analyze recovers the default synthetic mixture end to end") {
    const fs::path events = work_dir() / "events_a.csv";
    if (!fs::exists(events)) {
        REQUIRE(run_cli("synth --events " + quoted(events) + " --labels " +
                        quoted(work_dir() / "labels_a.csv"))
                    .exit_code == 0);
    }

    const fs::path report = work_dir() / "report.json";
    const fs::path features = work_dir() / "features.csv";
    const fs::path scatter = work_dir() / "scatter.svg";
    const fs::path series = work_dir() / "series.csv";
    const fs::path model = work_dir() / "model.json";
    const std::string exports = " --out " + quoted(report) + " --export-features " +
                                quoted(features) + " --export-scatter " + quoted(scatter) +
                                " --export-series " + quoted(series) + " --export-model " +
                                quoted(model);
    const CommandResult result = run_cli("analyze " + quoted(events) + exports);
    CHECK(result.exit_code == 0);
    CHECK(result.output.empty());

    const std::string report_text = slurp(report);
    const nlohmann::json j = nlohmann::json::parse(report_text);
    CHECK(j["instance_type"] == "Sustainable");
    CHECK(j["k_star"] == 4);
    CHECK(j["users"] == 1000);
    CHECK(j["events"] == line_count(slurp(events)) - 1);
    CHECK(j["dropped_events"] == 0);
    CHECK(j["window"]["months"] == 60);
    CHECK_FALSE(j.contains("classification_error"));

    // One questions row and one answers row per user, plus the header.
    const std::string features_text = slurp(features);
    CHECK(features_text.starts_with("user_id,kind,many_peaks,duplicate_max,unique_nonzero_ratio\n"));
    CHECK(line_count(features_text) == 2001);

    const std::string svg = slurp(scatter);
    CHECK(svg.starts_with("<svg "));
    CHECK(count_occurrences(svg, "<circle ") == 1000);

    const std::string series_text = slurp(series);
    CHECK(series_text.starts_with("user_id,kind,month_index,count\n"));
    // 1000 users x 2 kinds x 60 months, plus the header.
    CHECK(line_count(series_text) == 1 + 1000 * 2 * 60);

    const nlohmann::json m = nlohmann::json::parse(slurp(model));
    CHECK(m["k_star"] == 4);
    CHECK(m["labels"].size() == 1000);
    CHECK(m["users"].size() == 1000);

    // The whole command is a pure function of its inputs.
    const fs::path report2 = work_dir() / "report2.json";
    const CommandResult again = run_cli("analyze " + quoted(events) + " --out " + quoted(report2));
    CHECK(again.exit_code == 0);
    CHECK(slurp(report2) == report_text);
}

TEST_CASE("a header-only event file is a data error") {
    const fs::path empty = work_dir() / "empty.csv";
    write_file(empty, "user_id,timestamp,kind\n");
    const CommandResult result = run_cli("analyze " + quoted(empty));
    CHECK(result.exit_code == 2);
    CHECK(result.error.find("error: no events") != std::string::npos);
}

TEST_CASE("the bundled dump fixtures are too degenerate to cluster") {
    const fs::path posts = fs::path(QAH_FIXTURES_DIR) / "Posts.xml";
    const fs::path comments = fs::path(QAH_FIXTURES_DIR) / "Comments.xml";
    const CommandResult result = run_cli("analyze " + quoted(posts) + " " + quoted(comments));
    CHECK(result.exit_code == 2);
    CHECK(result.error.find("skipped 1 of 3 rows (1 missing user, 0 bad timestamp)") !=
          std::string::npos);
    CHECK(result.error.find("only 1 distinct feature points; need at least 2") !=
          std::string::npos);
}

TEST_CASE("format sniffing reads extensionless XML") {
    const fs::path dump = work_dir() / "dump_noext";
    write_file(dump, slurp(fs::path(QAH_FIXTURES_DIR) / "Posts.xml"));
    const CommandResult result = run_cli("analyze " + quoted(dump));
    // The XML reader ran (and reported its skip), not the CSV header check.
    // The two surviving posts come from two users whose features differ, so
    // the analysis completes and lands on the K = 2 naming refusal.
    CHECK(result.exit_code == 3);
    CHECK(result.error.find("skipped 1 of 3 rows") != std::string::npos);
    CHECK(result.error.find("classification refused") != std::string::npos);
}

TEST_CASE("refusal exits with the dedicated code but still writes the report") {
    const fs::path ramp = work_dir() / "ramp.csv";
    write_file(ramp, ramp_csv());
    const fs::path report = work_dir() / "refusal.json";
    const CommandResult result = run_cli("analyze " + quoted(ramp) + " --out " + quoted(report));
    CHECK(result.exit_code == 3);
    CHECK(result.error.find("classification refused: unnamed clusters") != std::string::npos);

    const nlohmann::json j = nlohmann::json::parse(slurp(report));
    CHECK(j["instance_type"].is_null());
    CHECK(j["k_star"] == 2);
    CHECK(j["classification_error"] == "unnamed clusters");
}

TEST_CASE("the report goes to stdout when no path is given") {
    const fs::path ramp = work_dir() / "ramp.csv";
    write_file(ramp, ramp_csv());
    const CommandResult result = run_cli("analyze " + quoted(ramp));
    CHECK(result.exit_code == 3);
    const nlohmann::json j = nlohmann::json::parse(result.output);
    CHECK(j["k_star"] == 2);
}

TEST_CASE("bad inputs and flags produce clean failures") {
    const fs::path ramp = work_dir() / "ramp.csv";
    write_file(ramp, ramp_csv());

    const CommandResult missing = run_cli("analyze " + quoted(work_dir() / "missing.csv"));
    CHECK(missing.exit_code == 2);
    CHECK(missing.error.find("cannot open input file") != std::string::npos);

    const CommandResult bad_cutoff = run_cli("analyze " + quoted(ramp) + " --cutoff-month 2014/01");
    CHECK(bad_cutoff.exit_code == 2);
    CHECK(bad_cutoff.error.find("error:") != std::string::npos);

    const CommandResult bad_k = run_cli("analyze " + quoted(ramp) + " --k-min 1");
    CHECK(bad_k.exit_code != 0);
    CHECK(bad_k.exit_code != 3);

    const CommandResult missing_spec =
        run_cli("synth --spec " + quoted(work_dir() / "missing_spec.txt"));
    CHECK(missing_spec.exit_code == 2);
    CHECK(missing_spec.error.find("cannot open spec file") != std::string::npos);

    const fs::path bad_spec = work_dir() / "bad_spec.txt";
    write_file(bad_spec, "velocity = 3\n");
    const CommandResult unknown_key = run_cli("synth --spec " + quoted(bad_spec));
    CHECK(unknown_key.exit_code == 2);
    CHECK(unknown_key.error.find("unknown key 'velocity' on line 1") != std::string::npos);

    const CommandResult no_subcommand = run_cli("");
    CHECK(no_subcommand.exit_code != 0);
}

/// qah: activity-archetype analysis for Q&A communities.
///
/// `qah analyze` ingests Stack Exchange dump XML or generic event CSV,
/// clusters per-user monthly activity features, names the clusters, and
/// classifies the instance's maturity. `qah synth` generates synthetic
/// instances with known ground truth.

#include <cctype>
#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "qah/csv.hpp"
#include "qah/ingest.hpp"
#include "qah/pipeline.hpp"
#include "qah/report.hpp"
#include "qah/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 2;
constexpr int kExitRefusal = 3;

enum class InputFormat { StackExchangeXml, EventCsv };

/// Extension decides; anything else is sniffed by its first non-space byte.
InputFormat detect_format(const std::string& path, std::istream& in) {
    const auto dot = path.rfind('.');
    if (dot != std::string::npos) {
        std::string ext = path.substr(dot + 1);
        for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (ext == "xml") return InputFormat::StackExchangeXml;
        if (ext == "csv") return InputFormat::EventCsv;
    }
    int c;
    while ((c = in.peek()) != std::char_traits<char>::eof() &&
           std::isspace(static_cast<unsigned char>(c))) {
        in.get();
    }
    return c == '<' ? InputFormat::StackExchangeXml : InputFormat::EventCsv;
}

std::vector<qah::ActivityEvent> load_events(const std::vector<std::string>& inputs) {
    std::vector<qah::ActivityEvent> events;
    for (const std::string& path : inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw qah::DataError("cannot open input file: " + path);
        const qah::EventSink sink = [&](const qah::ActivityEvent& e) { events.push_back(e); };
        if (detect_format(path, in) == InputFormat::StackExchangeXml) {
            const qah::SkipReport report = qah::parse_stackexchange_xml(in, sink);
            if (report.skipped > 0) {
                std::cerr << path << ": skipped " << report.skipped << " of " << report.rows
                          << " rows (" << report.missing_user << " missing user, "
                          << report.bad_timestamp << " bad timestamp)\n";
            }
        } else {
            const qah::CsvReport report = qah::parse_event_csv(in, sink);
            if (report.skipped > 0) {
                std::cerr << path << ": skipped " << report.skipped << " malformed lines\n";
            }
        }
    }
    return events;
}

/// Writes to `path`, or to stdout when the path is empty or "-".
void write_output(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    if (path.empty() || path == "-") {
        writer(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qah::DataError("cannot open output file: " + path);
    writer(out);
    if (!out) throw qah::DataError("error writing output file: " + path);
}

int run_analyze(const std::vector<std::string>& inputs, const qah::AnalysisOptions& options,
                const std::string& out_path, const std::string& features_path,
                const std::string& scatter_path, const std::string& series_path,
                const std::string& model_path) {
    const std::vector<qah::ActivityEvent> events = load_events(inputs);
    if (events.empty()) throw qah::DataError("no events");

    const qah::AnalysisResult result = qah::analyze(events, options);

    write_output(out_path, [&](std::ostream& out) { qah::write_report_json(out, result); });
    if (!features_path.empty()) {
        write_output(features_path,
                     [&](std::ostream& out) { qah::write_features_csv(out, result); });
    }
    if (!scatter_path.empty()) {
        write_output(scatter_path,
                     [&](std::ostream& out) { qah::write_scatter_svg(out, result); });
    }
    if (!series_path.empty()) {
        write_output(series_path,
                     [&](std::ostream& out) { qah::write_series_csv(out, result.series); });
    }
    if (!model_path.empty()) {
        write_output(model_path, [&](std::ostream& out) { qah::write_model_json(out, result); });
    }

    if (!result.classification_error.empty()) {
        std::cerr << "classification refused: " << result.classification_error << "\n";
        return kExitRefusal;
    }
    return kExitOk;
}

int run_synth(const std::string& spec_path, const std::string& events_path,
              const std::string& labels_path) {
    qah::MixtureSpec spec;
    if (spec_path.empty()) {
        spec = qah::MixtureSpec::defaults();
    } else {
        std::ifstream in(spec_path, std::ios::binary);
        if (!in) throw qah::DataError("cannot open spec file: " + spec_path);
        spec = qah::parse_mixture_spec(in);
    }
    const qah::GeneratedInstance instance = qah::generate_instance(spec);
    write_output(events_path,
                 [&](std::ostream& out) { qah::write_event_csv(out, instance.events); });
    write_output(labels_path,
                 [&](std::ostream& out) { qah::write_labels_csv(out, instance.labels); });
    std::cerr << "generated " << instance.labels.size() << " users, " << instance.events.size()
              << " events\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Activity-archetype analysis for Q&A communities"};
    app.require_subcommand(1);

    // analyze
    std::vector<std::string> inputs;
    qah::AnalysisOptions options;
    std::string cutoff_text;
    std::string out_path;
    std::string features_path;
    std::string scatter_path;
    std::string series_path;
    std::string model_path;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Cluster user activity and classify the instance's maturity");
    analyze->add_option("inputs", inputs, "Posts.xml / Comments.xml / events CSV")
        ->required()
        ->expected(-1);
    analyze->add_option("--seed", options.seed, "Clustering seed")->capture_default_str();
    analyze->add_option("--k-min", options.k_min, "Smallest K tried")->capture_default_str();
    analyze->add_option("--k-max", options.k_max, "Largest K tried")->capture_default_str();
    analyze->add_option("--restarts", options.restarts, "K-Means restarts per K")
        ->capture_default_str();
    analyze->add_option("--peak-threshold", options.peak_threshold,
                        "many_peaks is 1 when the peak count exceeds this")
        ->capture_default_str();
    analyze->add_option("--sustainable-threshold", options.sustainable_threshold,
                        "Backbone answer share required for Sustainable")
        ->capture_default_str();
    analyze->add_option("--cutoff-month", cutoff_text,
                        "Observation cutoff, YYYY-MM; later events are dropped");
    analyze->add_flag("--evolution", options.evolution,
                      "Reclassify truncated prefixes on a fixed schedule");
    analyze->add_option("--evolution-step", options.evolution_step, "Months between checkpoints")
        ->capture_default_str();
    analyze->add_option("--evolution-horizon", options.evolution_horizon,
                        "Last checkpoint month")
        ->capture_default_str();
    analyze->add_flag("--baseline", options.with_baseline,
                      "Also report random-assignment silhouettes");
    analyze->add_option("--out", out_path, "Report JSON path (default: stdout)");
    analyze->add_option("--export-features", features_path, "Write the per-user feature CSV");
    analyze->add_option("--export-scatter", scatter_path, "Write an SVG of the PCA projection");
    analyze->add_option("--export-series", series_path, "Write the per-user monthly series CSV");
    analyze->add_option("--export-model", model_path, "Write the clustering model JSON");

    // synth
    std::string spec_path;
    std::string synth_events_path = "events.csv";
    std::string synth_labels_path = "labels.csv";
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic instance with ground-truth labels");
    synth->add_option("--spec", spec_path, "Mixture spec file (default: built-in 1,000 users)");
    synth->add_option("--events", synth_events_path, "Event CSV output path")
        ->capture_default_str();
    synth->add_option("--labels", synth_labels_path, "Ground-truth label CSV output path")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            if (options.k_min < 2 || options.k_max < options.k_min) {
                throw CLI::ValidationError("--k-min/--k-max",
                                           "need 2 <= k-min <= k-max");
            }
            if (options.evolution_step < 1 || options.evolution_horizon < 1) {
                throw CLI::ValidationError("--evolution-step/--evolution-horizon",
                                           "need positive values");
            }
            if (!cutoff_text.empty()) {
                const std::optional<qah::YearMonth> cutoff = qah::parse_year_month(cutoff_text);
                if (!cutoff) {
                    throw qah::DataError("bad --cutoff-month '" + cutoff_text +
                                         "' (want YYYY-MM)");
                }
                options.cutoff_month = *cutoff;
            }
            return run_analyze(inputs, options, out_path, features_path, scatter_path,
                               series_path, model_path);
        }
        return run_synth(spec_path, synth_events_path, synth_labels_path);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
}

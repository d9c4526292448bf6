#include "qah/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qah/csv.hpp"

namespace qah {
namespace {

/// Fixed palette: the four archetypes keep stable colors; Variant clusters
/// cycle through a neutral ramp.
std::string_view archetype_color(const ArchetypeStats& stats, std::size_t position) {
    if (stats.archetype) {
        switch (*stats.archetype) {
            case Archetype::NonRecurring: return "#4e79a7";
            case Archetype::Sporadic: return "#f28e2b";
            case Archetype::Frequent: return "#59a14f";
            case Archetype::Permanent: return "#e15759";
        }
    }
    static constexpr std::string_view ramp[] = {"#767f8b", "#b07aa1", "#9c755f", "#bab0ac",
                                                "#76b7b2", "#edc948", "#ff9da7", "#86bcb6",
                                                "#d37295", "#8cd17d"};
    return ramp[position % std::size(ramp)];
}

void write_json_string(std::ostream& out, std::string_view text) {
    out << '"' << json_escape(text) << '"';
}

void write_optional_double(std::ostream& out, const std::optional<double>& value) {
    if (value) {
        out << format_double(*value);
    } else {
        out << "null";
    }
}

void write_per_k(std::ostream& out, const std::map<int, double>& per_k,
                 std::string_view item_indent, std::string_view close_indent) {
    out << "{";
    bool first = true;
    for (const auto& [k, silhouette] : per_k) {
        if (!first) out << ",";
        first = false;
        out << "\n" << item_indent << "\"" << k << "\": " << format_double(silhouette);
    }
    out << "\n" << close_indent << "}";
}

}  // namespace

std::string format_double(double value) {
    if (!std::isfinite(value)) return "null";
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::string json_escape(std::string_view text) {
    std::string escaped;
    escaped.reserve(text.size());
    for (unsigned char c : text) {
        switch (c) {
            case '"': escaped += "\\\""; break;
            case '\\': escaped += "\\\\"; break;
            case '\n': escaped += "\\n"; break;
            case '\r': escaped += "\\r"; break;
            case '\t': escaped += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buffer[8];
                    std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
                    escaped += buffer;
                } else {
                    escaped += static_cast<char>(c);
                }
        }
    }
    return escaped;
}

void write_report_json(std::ostream& out, const AnalysisResult& result) {
    out << "{\n";
    out << "  \"instance_type\": ";
    if (result.instance_type) {
        write_json_string(out, to_string(*result.instance_type));
    } else {
        out << "null";
    }
    out << ",\n";

    out << "  \"k_star\": " << result.selection.k_star << ",\n";

    out << "  \"per_k_silhouette\": ";
    write_per_k(out, result.selection.per_k, "    ", "  ");
    out << ",\n";

    out << "  \"archetypes\": [";
    for (std::size_t i = 0; i < result.stats.size(); ++i) {
        const ArchetypeStats& a = result.stats[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\n";
        out << "      \"name\": ";
        write_json_string(out, a.name);
        out << ",\n";
        out << "      \"users\": " << a.users << ",\n";
        out << "      \"user_fraction\": " << format_double(a.user_fraction) << ",\n";
        out << "      \"median_questions\": " << format_double(a.median_questions) << ",\n";
        out << "      \"median_answers\": " << format_double(a.median_answers) << ",\n";
        out << "      \"median_active_months\": " << format_double(a.median_active_months)
            << ",\n";
        out << "      \"median_tenure_months\": " << format_double(a.median_tenure_months)
            << ",\n";
        out << "      \"question_fraction\": ";
        write_optional_double(out, a.question_fraction);
        out << ",\n";
        out << "      \"answer_fraction\": ";
        write_optional_double(out, a.answer_fraction);
        out << "\n    }";
    }
    out << "\n  ],\n";

    out << "  \"trend_slope\": " << format_double(result.trend.slope) << ",\n";

    out << "  \"evolution\": [";
    for (std::size_t i = 0; i < result.evolution.size(); ++i) {
        const EvolutionPoint& point = result.evolution[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"cutoff_month\": " << point.cutoff_month << ", \"type\": ";
        write_json_string(out, point.outcome);
        out << "}";
    }
    out << (result.evolution.empty() ? "],\n" : "\n  ],\n");

    if (!result.classification_error.empty()) {
        out << "  \"classification_error\": ";
        write_json_string(out, result.classification_error);
        out << ",\n";
    }
    out << "  \"window\": {\"start\": ";
    write_json_string(out, to_string(result.window.start));
    out << ", \"end\": ";
    write_json_string(out, to_string(result.window.end));
    out << ", \"months\": " << result.window.month_count << "},\n";
    out << "  \"users\": " << result.rows.size() << ",\n";
    out << "  \"events\": " << result.events_in_window << ",\n";
    out << "  \"dropped_events\": " << result.dropped_events << ",\n";
    out << "  \"peak_count_p90\": " << result.peak_count_p90;
    if (result.baseline) {
        out << ",\n  \"baseline_per_k_silhouette\": ";
        write_per_k(out, result.baseline->per_k, "    ", "  ");
    }
    out << "\n}\n";
}

void write_features_csv(std::ostream& out, const AnalysisResult& result) {
    out << "user_id,kind,many_peaks,duplicate_max,unique_nonzero_ratio\n";
    for (const UserFeatureRow& row : result.rows) {
        for (const auto& [kind, features] :
             {std::pair{"questions", &row.questions}, std::pair{"answers", &row.answers}}) {
            write_csv_field(out, row.series->user_id);
            out << ',' << kind << ',' << (features->many_peaks ? 1 : 0) << ','
                << (features->duplicate_max ? 1 : 0) << ','
                << format_double(features->unique_nonzero_ratio) << '\n';
        }
    }
}

void write_model_json(std::ostream& out, const AnalysisResult& result) {
    out << "{\n";
    out << "  \"k_star\": " << result.selection.k_star << ",\n";
    out << "  \"per_k_silhouette\": ";
    write_per_k(out, result.selection.per_k, "    ", "  ");
    out << ",\n";

    out << "  \"centroids\": [";
    const auto& centroids = result.selection.model.centroids;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        out << (c == 0 ? "\n" : ",\n");
        out << "    [" << format_double(centroids[c][0]) << ", " << format_double(centroids[c][1])
            << ", " << format_double(centroids[c][2]) << "]";
    }
    out << "\n  ],\n";

    out << "  \"cluster_names\": [";
    for (std::size_t c = 0; c < result.cluster_labels.size(); ++c) {
        if (c > 0) out << ", ";
        write_json_string(out, result.cluster_labels[c].name());
    }
    out << "],\n";

    out << "  \"users\": [";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (i > 0) out << ", ";
        write_json_string(out, result.rows[i].series->user_id);
    }
    out << "],\n";

    out << "  \"labels\": [";
    for (std::size_t i = 0; i < result.selection.model.labels.size(); ++i) {
        if (i > 0) out << ", ";
        out << result.selection.model.labels[i];
    }
    out << "],\n";

    out << "  \"pca\": {\n";
    out << "    \"explained\": [" << format_double(result.pca.explained[0]) << ", "
        << format_double(result.pca.explained[1]) << "],\n";
    out << "    \"degenerate\": " << (result.pca.degenerate ? "true" : "false") << ",\n";
    out << "    \"coordinates\": [";
    for (std::size_t i = 0; i < result.pca.coordinates.size(); ++i) {
        out << (i == 0 ? "\n" : ",\n");
        out << "      [" << format_double(result.pca.coordinates[i][0]) << ", "
            << format_double(result.pca.coordinates[i][1]) << "]";
    }
    out << "\n    ]\n  }\n";
    out << "}\n";
}

void write_scatter_svg(std::ostream& out, const AnalysisResult& result) {
    constexpr double kWidth = 720.0;
    constexpr double kHeight = 540.0;
    constexpr double kMarginLeft = 64.0;
    constexpr double kMarginRight = 168.0;
    constexpr double kMarginTop = 40.0;
    constexpr double kMarginBottom = 56.0;

    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    for (std::size_t i = 0; i < result.pca.coordinates.size(); ++i) {
        const auto& c = result.pca.coordinates[i];
        if (i == 0) {
            min_x = max_x = c[0];
            min_y = max_y = c[1];
        } else {
            min_x = std::min(min_x, c[0]);
            max_x = std::max(max_x, c[0]);
            min_y = std::min(min_y, c[1]);
            max_y = std::max(max_y, c[1]);
        }
    }
    if (max_x - min_x < 1e-12) {
        min_x -= 0.5;
        max_x += 0.5;
    }
    if (max_y - min_y < 1e-12) {
        min_y -= 0.5;
        max_y += 0.5;
    }
    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto sx = [&](double x) {
        return kMarginLeft + (x - min_x) / (max_x - min_x) * plot_w;
    };
    const auto sy = [&](double y) {
        return kMarginTop + (max_y - y) / (max_y - min_y) * plot_h;
    };

    // Cluster index -> color, driven by the report-ordered stats.
    std::vector<std::string_view> color_of_cluster(result.cluster_labels.size(), "#767f8b");
    for (std::size_t i = 0; i < result.stats.size(); ++i) {
        const std::size_t cluster = static_cast<std::size_t>(result.stats[i].cluster);
        if (cluster < color_of_cluster.size()) {
            color_of_cluster[cluster] = archetype_color(result.stats[i], i);
        }
    }

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
        << "\">\n";
    out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"#ffffff\"/>\n";
    out << "  <rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"#fafafa\" stroke=\"#cccccc\"/>\n";

    out << "  <text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">PC1 ("
        << format_double(result.pca.explained[0] * 100.0) << "% variance)</text>\n";
    out << "  <text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\""
        << "rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">PC2 ("
        << format_double(result.pca.explained[1] * 100.0) << "% variance)</text>\n";

    for (std::size_t i = 0; i < result.pca.coordinates.size(); ++i) {
        const int label = result.selection.model.labels[i];
        std::string_view color = "#767f8b";
        if (label >= 0 && static_cast<std::size_t>(label) < color_of_cluster.size()) {
            color = color_of_cluster[static_cast<std::size_t>(label)];
        }
        out << "  <circle cx=\"" << format_double(sx(result.pca.coordinates[i][0])) << "\" cy=\""
            << format_double(sy(result.pca.coordinates[i][1])) << "\" r=\"3\" fill=\"" << color
            << "\" fill-opacity=\"0.75\"/>\n";
    }

    double legend_y = kMarginTop + 8.0;
    const double legend_x = kWidth - kMarginRight + 16.0;
    out << "  <text x=\"" << legend_x << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"13\" font-weight=\"bold\">Clusters</text>\n";
    legend_y += 18.0;
    for (std::size_t i = 0; i < result.stats.size(); ++i) {
        const ArchetypeStats& a = result.stats[i];
        out << "  <rect x=\"" << legend_x << "\" y=\"" << legend_y - 9 << "\" width=\"10\""
            << " height=\"10\" fill=\"" << archetype_color(a, i) << "\"/>\n";
        out << "  <text x=\"" << legend_x + 16 << "\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << a.name << " ("
            << a.users << ")</text>\n";
        legend_y += 16.0;
    }
    out << "</svg>\n";
}

}  // namespace qah

#pragma once

#include <ostream>
#include <string>

#include "qah/pipeline.hpp"

namespace qah {

/// Shortest decimal form with 12 significant digits ("%.12g"). Non-finite
/// values render as "null" so the output stays valid JSON.
std::string format_double(double value);

/// JSON string escaping for quotes, backslashes, and control characters.
std::string json_escape(std::string_view text);

/// The instance report. Field order is fixed and floats go through
/// format_double, so identical analyses serialize byte-identically.
void write_report_json(std::ostream& out, const AnalysisResult& result);

/// Per-user feature table: `user_id,kind,many_peaks,duplicate_max,
/// unique_nonzero_ratio`, kinds `questions` then `answers`.
void write_features_csv(std::ostream& out, const AnalysisResult& result);

/// Clustering model dump: k_star, per-K silhouettes, centroids, the label
/// array (user-id order), and the 2-D PCA coordinates.
void write_model_json(std::ostream& out, const AnalysisResult& result);

/// Static SVG 1.1 scatter of the PCA projection, points colored by named
/// cluster, axes labeled with explained variance.
void write_scatter_svg(std::ostream& out, const AnalysisResult& result);

}  // namespace qah

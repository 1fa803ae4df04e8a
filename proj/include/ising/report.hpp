#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ising/experiments.hpp"

namespace ising {

enum class ReportFormat { JsonLines, Csv, Svg };

ReportFormat report_format_from(const std::string& s);  // jsonl | csv | svg

// Rows of all records, each tagged with its experiment id under
// "experiment". CSV columns are the union of row keys in first-seen order.
std::string render_report(const std::vector<ExperimentRecord>& records, ReportFormat format);
// Writes render_report to `path`; throws IoError.
void emit_report(const std::vector<ExperimentRecord>& records, ReportFormat format, const std::string& path);

// Inverse of render_report for JsonLines and Csv.
std::vector<nlohmann::json> parse_report(const std::string& text, ReportFormat format);

// x/y keys plotted for an experiment.
std::pair<std::string, std::string> plot_axes(ExperimentId id);

}  // namespace ising

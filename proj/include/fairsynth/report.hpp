#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairsynth/fairness.hpp"

namespace fairsynth {

enum class RenderFormat { markdown, csv, json };

// Decimal rounding, ties away from zero. Applied at render time only;
// internal values are never rounded.
double round_half_up(double value, int digits);
// round_half_up at 2 digits, formatted with exactly two decimals.
std::string format_round2(double value);

// Recommended-action strings keyed by (metric, fairness level), with
// per-level fallbacks for metrics that have no specific entry. The table is
// versioned so reports record which wording they carried.
class ActionTable {
 public:
  ActionTable() = default;

  const std::string& version() const { return version_; }
  void set_version(std::string version) { version_ = std::move(version); }
  void set(const std::string& metric, FairnessLevel level, std::string action);
  void set_default(FairnessLevel level, std::string action);
  std::string action_for(const std::string& metric, FairnessLevel level) const;

 private:
  std::string version_ = "1";
  std::map<std::string, std::string> actions_;   // "metric/Level" -> text
  std::map<std::string, std::string> defaults_;  // "Level" -> text
};

const ActionTable& default_action_table();
// Merges {"version": "...", "actions": {"delta_wer/Poor": "..."},
// "defaults": {"Poor": "..."}} over the default table.
ActionTable load_action_table(std::string_view json_text);

// Key insight for one metric: the group(s) carrying the minimum DI, the
// minimum itself, its fairness level and the recommended action. Groups
// within 0.005 of the minimum are all listed.
struct InsightRow {
  std::string metric;
  std::vector<std::string> most_affected;
  std::optional<double> min_di;
  std::optional<FairnessLevel> level;
  std::string action;
};

std::vector<InsightRow> key_insights(const AuditReport& report,
                                     const ActionTable& actions = default_action_table());

// One row per group with PD/DI columns per metric. Markdown and CSV round
// half-up to 2 decimals and mark flagged cells; JSON carries full precision
// plus stats, insights, config and provenance. Output is byte-identical for
// identical inputs.
std::string render_fairness_table(const AuditReport& report, RenderFormat format,
                                  const ActionTable& actions = default_action_table());

// Per-metric insight table (markdown, CSV or JSON). Groups display as
// "No major impact" when the metric's level is Good.
std::string render_key_insights(const AuditReport& report, RenderFormat format = RenderFormat::markdown,
                                const ActionTable& actions = default_action_table());

// Long-format CSV (dimension, group, metric, mean, count), one row per stats
// cell, full-precision means. Header-only when stats are empty.
std::string emit_plot_data(const std::vector<GroupStats>& stats);

// Inverse of render_fairness_table(report, json): rebuilds the report from
// its JSON rendering.
AuditReport parse_report_json(std::string_view json_text);

}  // namespace fairsynth

#include "fairsynth/report.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "fairsynth/version.hpp"

namespace fairsynth {

namespace {

using nlohmann::json;

// Shortest round-trip decimal text for a double (nlohmann's serializer),
// used wherever full precision must stay byte-stable.
std::string full_precision(double value) { return json(value).dump(); }

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string level_text(const std::optional<FairnessLevel>& level) {
  return level ? to_string(*level) : "n/a";
}

std::string cell_round2(const std::optional<double>& value) {
  return value ? format_round2(*value) : "n/a";
}

json optional_number(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

json config_to_json(const AuditConfig& config) {
  json metrics = json::array();
  for (const auto& m : config.metrics) {
    metrics.push_back({{"name", m.name},
                       {"polarity", m.polarity == MetricPolarity::delta ? "delta" : "ratio"}});
  }
  return json{
      {"thresholds",
       {{"di_good", config.thresholds.di_good},
        {"pd_flag", config.thresholds.pd_flag},
        {"baseline_label", config.thresholds.baseline_label}}},
      {"policy",
       {{"lowercase", config.policy.lowercase},
        {"strip_punctuation", config.policy.strip_punctuation},
        {"collapse_whitespace", config.policy.collapse_whitespace}}},
      {"zero_ref_fallback",
       config.zero_ref_fallback == ZeroRefFallback::error ? "error" : "hypothesis_length"},
      {"metrics", metrics},
      {"label_order", config.label_order},
  };
}

AuditConfig config_from_json(const json& j) {
  AuditConfig config;
  const auto& thresholds = j.at("thresholds");
  config.thresholds.di_good = thresholds.at("di_good").get<double>();
  config.thresholds.pd_flag = thresholds.at("pd_flag").get<double>();
  config.thresholds.baseline_label = thresholds.at("baseline_label").get<std::string>();
  const auto& policy = j.at("policy");
  config.policy.lowercase = policy.at("lowercase").get<bool>();
  config.policy.strip_punctuation = policy.at("strip_punctuation").get<bool>();
  config.policy.collapse_whitespace = policy.at("collapse_whitespace").get<bool>();
  config.zero_ref_fallback = j.at("zero_ref_fallback").get<std::string>() == "error"
                                 ? ZeroRefFallback::error
                                 : ZeroRefFallback::hypothesis_length;
  config.metrics.clear();
  for (const auto& m : j.at("metrics")) {
    config.metrics.push_back(
        {m.at("name").get<std::string>(), m.at("polarity").get<std::string>() == "delta"
                                              ? MetricPolarity::delta
                                              : MetricPolarity::ratio});
  }
  config.label_order = j.at("label_order").get<std::vector<std::string>>();
  return config;
}

// Group labels in first-appearance order over the rows.
std::vector<std::string> row_groups(const AuditReport& report) {
  std::vector<std::string> groups;
  for (const auto& row : report.rows) {
    if (std::find(groups.begin(), groups.end(), row.group.label) == groups.end()) {
      groups.push_back(row.group.label);
    }
  }
  return groups;
}

const FairnessRow* find_row(const AuditReport& report, const std::string& metric,
                            const std::string& group) {
  for (const auto& row : report.rows) {
    if (row.metric == metric && row.group.label == group) return &row;
  }
  return nullptr;
}

std::string render_markdown(const AuditReport& report) {
  std::string out;
  out += "# Fairness audit: " + report.dimension + "\n\n";
  out += "- baseline: " + report.baseline.label + "\n";
  out += "- tool: fairsynth " + report.tool_version + "\n";
  out += "- input digest: fnv1a64:" + report.input_digest + "\n";
  out += "- thresholds: DI >= " + full_precision(report.config.thresholds.di_good) +
         " is Good, PD >= " + full_precision(report.config.thresholds.pd_flag) + " flags\n";
  if (report.unlabeled_count > 0) {
    out += "- unlabeled records (excluded): " + std::to_string(report.unlabeled_count) + "\n";
  }
  out += "\n";

  out += "| group |";
  for (const auto& metric : report.config.metrics) {
    out += " " + metric.name + " PD | " + metric.name + " DI |";
  }
  out += "\n|---|";
  for (std::size_t i = 0; i < report.config.metrics.size(); ++i) out += "---:|---:|";
  out += "\n";

  for (const auto& group : row_groups(report)) {
    out += "| " + group + " |";
    for (const auto& metric : report.config.metrics) {
      const FairnessRow* row = find_row(report, metric.name, group);
      std::string pd = row ? cell_round2(row->pd) : "n/a";
      std::string di = row ? cell_round2(row->di) : "n/a";
      if (row && row->flagged) {
        pd = "**" + pd + "**";
        di = "**" + di + "**";
      }
      out += " " + pd + " | " + di + " |";
    }
    out += "\n";
  }
  return out;
}

std::string render_csv(const AuditReport& report) {
  std::string out = "group";
  for (const auto& metric : report.config.metrics) {
    out += "," + metric.name + "_pd," + metric.name + "_di," + metric.name + "_level," +
           metric.name + "_flagged";
  }
  out += "\r\n";
  for (const auto& group : row_groups(report)) {
    out += csv_quote(group);
    for (const auto& metric : report.config.metrics) {
      const FairnessRow* row = find_row(report, metric.name, group);
      if (row) {
        out += "," + cell_round2(row->pd) + "," + cell_round2(row->di) + "," +
               level_text(row->level) + "," + (row->flagged ? "true" : "false");
      } else {
        out += ",n/a,n/a,n/a,false";
      }
    }
    out += "\r\n";
  }
  return out;
}

json insight_to_json(const InsightRow& insight) {
  return json{{"metric", insight.metric},
              {"most_affected", insight.most_affected},
              {"min_di", optional_number(insight.min_di)},
              {"level", insight.level ? json(to_string(*insight.level)) : json(nullptr)},
              {"action", insight.action}};
}

std::string render_json(const AuditReport& report, const ActionTable& actions) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"group", row.group.label},
                    {"metric", row.metric},
                    {"pd", optional_number(row.pd)},
                    {"di", optional_number(row.di)},
                    {"level", row.level ? json(to_string(*row.level)) : json(nullptr)},
                    {"flagged", row.flagged},
                    {"count", row.count}});
  }
  json stats = json::array();
  for (const auto& s : report.stats) {
    stats.push_back({{"dimension", s.group.dimension},
                     {"group", s.group.label},
                     {"metric", s.metric},
                     {"mean", s.mean},
                     {"count", s.count}});
  }
  json insights = json::array();
  for (const auto& insight : key_insights(report, actions)) {
    insights.push_back(insight_to_json(insight));
  }
  json warnings = json::array();
  for (const auto& [where, message] : report.warnings) {
    warnings.push_back({{"where", where}, {"message", message}});
  }
  const json doc{
      {"dimension", report.dimension},
      {"baseline", {{"dimension", report.baseline.dimension}, {"label", report.baseline.label}}},
      {"rows", rows},
      {"stats", stats},
      {"insights", insights},
      {"config", config_to_json(report.config)},
      {"provenance",
       {{"tool", "fairsynth"},
        {"version", report.tool_version},
        {"input_digest", "fnv1a64:" + report.input_digest},
        {"action_table_version", actions.version()}}},
      {"unlabeled_count", report.unlabeled_count},
      {"warnings", warnings},
  };
  return doc.dump(2) + "\n";
}

}  // namespace

double round_half_up(double value, int digits) {
  double scale = 1.0;
  for (int i = 0; i < digits; ++i) scale *= 10.0;
  const double scaled = value * scale;
  const double rounded = scaled >= 0.0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
  return rounded / scale;
}

std::string format_round2(double value) {
  const double scaled = value * 100.0;
  const long long k = scaled >= 0.0 ? static_cast<long long>(std::floor(scaled + 0.5))
                                    : static_cast<long long>(std::ceil(scaled - 0.5));
  const unsigned long long magnitude =
      k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  std::string fraction = std::to_string(magnitude % 100);
  if (fraction.size() < 2) fraction.insert(0, "0");
  return (k < 0 ? "-" : "") + std::to_string(magnitude / 100) + "." + fraction;
}

void ActionTable::set(const std::string& metric, FairnessLevel level, std::string action) {
  actions_[metric + "/" + to_string(level)] = std::move(action);
}

void ActionTable::set_default(FairnessLevel level, std::string action) {
  defaults_[to_string(level)] = std::move(action);
}

std::string ActionTable::action_for(const std::string& metric, FairnessLevel level) const {
  if (auto it = actions_.find(metric + "/" + to_string(level)); it != actions_.end()) {
    return it->second;
  }
  if (auto it = defaults_.find(to_string(level)); it != defaults_.end()) return it->second;
  return "";
}

const ActionTable& default_action_table() {
  static const ActionTable table = [] {
    ActionTable t;
    t.set("delta_wer", FairnessLevel::poor,
          "Intelligibility-aware speech data augmentation is needed.");
    t.set("delta_cer", FairnessLevel::poor,
          "Adapt ASR models to represent severity for better generalisation.");
    t.set_default(FairnessLevel::good, "Minimal intervention is needed.");
    t.set_default(FairnessLevel::poor, "Targeted augmentation for the affected groups is needed.");
    return t;
  }();
  return table;
}

ActionTable load_action_table(std::string_view json_text) {
  const auto parsed = json::parse(json_text, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw InputError("action table is not a JSON object");
  }
  ActionTable table = default_action_table();
  if (auto it = parsed.find("version"); it != parsed.end() && it->is_string()) {
    table.set_version(it->get<std::string>());
  }
  auto parse_level = [](const std::string& text) {
    if (text == "Good") return FairnessLevel::good;
    if (text == "Poor") return FairnessLevel::poor;
    throw InputError("unknown fairness level '" + text + "' in action table");
  };
  if (auto it = parsed.find("actions"); it != parsed.end()) {
    for (const auto& [key, value] : it->items()) {
      const auto slash = key.rfind('/');
      if (slash == std::string::npos || !value.is_string()) {
        throw InputError("action table entries must look like \"metric/Level\": \"text\"");
      }
      table.set(key.substr(0, slash), parse_level(key.substr(slash + 1)),
                value.get<std::string>());
    }
  }
  if (auto it = parsed.find("defaults"); it != parsed.end()) {
    for (const auto& [key, value] : it->items()) {
      if (!value.is_string()) throw InputError("action table defaults must be strings");
      table.set_default(parse_level(key), value.get<std::string>());
    }
  }
  return table;
}

std::vector<InsightRow> key_insights(const AuditReport& report, const ActionTable& actions) {
  std::vector<InsightRow> insights;
  for (const auto& metric : report.config.metrics) {
    InsightRow insight;
    insight.metric = metric.name;

    std::optional<double> min_di;
    for (const auto& row : report.rows) {
      if (row.metric != metric.name || row.group == report.baseline || !row.di) continue;
      if (!min_di || *row.di < *min_di) min_di = *row.di;
    }
    if (min_di) {
      for (const auto& row : report.rows) {
        if (row.metric != metric.name || row.group == report.baseline || !row.di) continue;
        if (*row.di <= *min_di + 0.005) insight.most_affected.push_back(row.group.label);
      }
      insight.min_di = min_di;
      insight.level = *min_di >= report.config.thresholds.di_good ? FairnessLevel::good
                                                                  : FairnessLevel::poor;
      insight.action = actions.action_for(metric.name, *insight.level);
    } else {
      insight.action = "n/a";
    }
    insights.push_back(std::move(insight));
  }
  return insights;
}

std::string render_fairness_table(const AuditReport& report, RenderFormat format,
                                  const ActionTable& actions) {
  switch (format) {
    case RenderFormat::markdown:
      return render_markdown(report);
    case RenderFormat::csv:
      return render_csv(report);
    case RenderFormat::json:
      return render_json(report, actions);
  }
  throw InputError("unknown render format");
}

std::string render_key_insights(const AuditReport& report, RenderFormat format,
                                const ActionTable& actions) {
  const std::vector<InsightRow> insights = key_insights(report, actions);

  auto affected_text = [](const InsightRow& insight) -> std::string {
    if (insight.level && *insight.level == FairnessLevel::good) return "No major impact";
    if (insight.most_affected.empty()) return "n/a";
    std::string joined;
    for (const auto& label : insight.most_affected) {
      if (!joined.empty()) joined += ", ";
      joined += label;
    }
    return joined;
  };

  if (format == RenderFormat::json) {
    json doc = json::array();
    for (const auto& insight : insights) doc.push_back(insight_to_json(insight));
    return doc.dump(2) + "\n";
  }
  if (format == RenderFormat::csv) {
    std::string out = "metric,most_affected,min_di,level,action\r\n";
    for (const auto& insight : insights) {
      out += csv_quote(insight.metric) + "," + csv_quote(affected_text(insight)) + "," +
             cell_round2(insight.min_di) + "," + level_text(insight.level) + "," +
             csv_quote(insight.action) + "\r\n";
    }
    return out;
  }
  std::string out = "| metric | most affected | min DI | level | recommended action |\n";
  out += "|---|---|---:|---|---|\n";
  for (const auto& insight : insights) {
    out += "| " + insight.metric + " | " + affected_text(insight) + " | " +
           cell_round2(insight.min_di) + " | " + level_text(insight.level) + " | " +
           insight.action + " |\n";
  }
  return out;
}

std::string emit_plot_data(const std::vector<GroupStats>& stats) {
  std::string out = "dimension,group,metric,mean,count\r\n";
  for (const auto& s : stats) {
    out += csv_quote(s.group.dimension) + "," + csv_quote(s.group.label) + "," +
           csv_quote(s.metric) + "," + full_precision(s.mean) + "," + std::to_string(s.count) +
           "\r\n";
  }
  return out;
}

AuditReport parse_report_json(std::string_view json_text) {
  const auto doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw InputError("audit report is not a JSON object");
  }
  try {
    AuditReport report;
    report.dimension = doc.at("dimension").get<std::string>();
    report.baseline = GroupKey(doc.at("baseline").at("dimension").get<std::string>(),
                               doc.at("baseline").at("label").get<std::string>());
    report.config = config_from_json(doc.at("config"));

    const auto& provenance = doc.at("provenance");
    report.tool_version = provenance.at("version").get<std::string>();
    std::string digest = provenance.at("input_digest").get<std::string>();
    if (digest.rfind("fnv1a64:", 0) == 0) digest.erase(0, 8);
    report.input_digest = digest;
    report.unlabeled_count = doc.at("unlabeled_count").get<std::size_t>();

    for (const auto& r : doc.at("rows")) {
      FairnessRow row;
      row.group = GroupKey(report.dimension, r.at("group").get<std::string>());
      row.metric = r.at("metric").get<std::string>();
      if (!r.at("pd").is_null()) row.pd = r.at("pd").get<double>();
      if (!r.at("di").is_null()) row.di = r.at("di").get<double>();
      if (!r.at("level").is_null()) {
        row.level = r.at("level").get<std::string>() == "Good" ? FairnessLevel::good
                                                               : FairnessLevel::poor;
      }
      row.flagged = r.at("flagged").get<bool>();
      row.count = r.at("count").get<std::size_t>();
      report.rows.push_back(std::move(row));
    }
    for (const auto& s : doc.at("stats")) {
      GroupStats stats;
      stats.group =
          GroupKey(s.at("dimension").get<std::string>(), s.at("group").get<std::string>());
      stats.metric = s.at("metric").get<std::string>();
      stats.mean = s.at("mean").get<double>();
      stats.count = s.at("count").get<std::size_t>();
      report.stats.push_back(std::move(stats));
    }
    for (const auto& w : doc.at("warnings")) {
      report.warnings.emplace_back(w.at("where").get<std::string>(),
                                   w.at("message").get<std::string>());
    }
    return report;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed audit report JSON: ") + e.what());
  }
}

}  // namespace fairsynth

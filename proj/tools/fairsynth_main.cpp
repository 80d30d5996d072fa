// fairsynth: fairness auditing for zero-shot speech cloning evaluation.
//
// Subcommands:
//   score    per-utterance metrics from a manifest, as JSONL
//   audit    group fairness table (parity difference / disparate impact)
//   compare  relative changes between downstream-task result conditions
//   report   re-render a saved audit report (table, insights, plot data)
//
// Exit codes: 0 ok, 1 data error, 2 usage error, 3 bias gate tripped.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairsynth/downstream.hpp"
#include "fairsynth/fairness.hpp"
#include "fairsynth/manifest.hpp"
#include "fairsynth/report.hpp"
#include "fairsynth/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGate = 3;

struct CommonOptions {
  std::string manifest_path;
  std::string format;  // "", "jsonl" or "csv"
  std::string out_path;
  bool strict = false;
  bool no_lowercase = false;
  bool no_strip_punctuation = false;
  bool no_collapse_whitespace = false;
  std::string zero_ref = "error";
};

fairsynth::NormalizationPolicy policy_from(const CommonOptions& opts) {
  fairsynth::NormalizationPolicy policy;
  policy.lowercase = !opts.no_lowercase;
  policy.strip_punctuation = !opts.no_strip_punctuation;
  policy.collapse_whitespace = !opts.no_collapse_whitespace;
  return policy;
}

fairsynth::ZeroRefFallback zero_ref_from(const CommonOptions& opts) {
  return opts.zero_ref == "hyp-length" ? fairsynth::ZeroRefFallback::hypothesis_length
                                       : fairsynth::ZeroRefFallback::error;
}

std::optional<fairsynth::ManifestFormat> manifest_format(const CommonOptions& opts) {
  if (opts.format == "jsonl") return fairsynth::ManifestFormat::jsonl;
  if (opts.format == "csv") return fairsynth::ManifestFormat::csv;
  return std::nullopt;  // by file extension
}

fairsynth::RenderFormat render_format(const std::string& name) {
  if (name == "md") return fairsynth::RenderFormat::markdown;
  if (name == "csv") return fairsynth::RenderFormat::csv;
  return fairsynth::RenderFormat::json;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw fairsynth::InputError("cannot write output file '" + out_path + "'");
  out << text;
}

void print_issues(const std::vector<std::pair<std::string, std::string>>& issues,
                  const char* kind) {
  for (const auto& [where, message] : issues) {
    std::cerr << kind << ": " << where << ": " << message << "\n";
  }
}

// Parses and validates; returns records or exits via return code >= 0.
int load_manifest(const CommonOptions& opts, std::vector<fairsynth::UtteranceRecord>& records) {
  fairsynth::ParsedManifest parsed =
      fairsynth::parse_manifest_file(opts.manifest_path, manifest_format(opts));
  fairsynth::ValidationReport report = validate_records(parsed.records);
  report.merge(parsed.report);
  print_issues(report.errors, "error");
  print_issues(report.warnings, "warning");
  if (!report.accepted() || (opts.strict && !report.warnings.empty())) {
    if (report.accepted()) std::cerr << "error: warnings escalated by --strict\n";
    return kExitDataError;
  }
  records = std::move(parsed.records);
  return -1;
}

nlohmann::json metrics_to_json(const fairsynth::UtteranceMetrics& m) {
  nlohmann::json obj = nlohmann::json::object();
  obj["utt_id"] = m.utt_id;
  auto put = [&obj](const char* key, const std::optional<double>& value) {
    if (value) obj[key] = *value;
  };
  put("wer_prompt", m.wer_prompt);
  put("wer_generated", m.wer_generated);
  put("cer_prompt", m.cer_prompt);
  put("cer_generated", m.cer_generated);
  put("delta_wer", m.delta_wer);
  put("delta_cer", m.delta_cer);
  put("simo", m.simo);
  put("autopcp", m.autopcp);
  return obj;
}

int cmd_score(const CommonOptions& opts) {
  std::vector<fairsynth::UtteranceRecord> records;
  if (int rc = load_manifest(opts, records); rc >= 0) return rc;

  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.utt_id < b.utt_id; });
  std::vector<std::pair<std::string, std::string>> warnings;
  std::string out;
  for (const auto& rec : records) {
    const auto metrics =
        fairsynth::score_utterance(rec, policy_from(opts), zero_ref_from(opts), &warnings);
    out += metrics_to_json(metrics).dump();
    out += '\n';
  }
  print_issues(warnings, "warning");
  if (opts.strict && !warnings.empty()) {
    std::cerr << "error: warnings escalated by --strict\n";
    return kExitDataError;
  }
  write_output(opts.out_path, out);
  return kExitOk;
}

struct AuditOptions {
  CommonOptions common;
  std::string dimension;
  std::string baseline = "healthy";
  std::vector<std::string> metrics;
  double di_good = 0.80;
  double pd_flag = 0.22;
  std::string output_format = "md";
  std::string actions_path;
  bool no_gate = false;
};

fairsynth::ActionTable actions_from(const std::string& path) {
  if (path.empty()) return fairsynth::default_action_table();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fairsynth::InputError("cannot open action table '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return fairsynth::load_action_table(buffer.str());
}

int cmd_audit(const AuditOptions& opts) {
  std::vector<fairsynth::UtteranceRecord> records;
  if (int rc = load_manifest(opts.common, records); rc >= 0) return rc;

  fairsynth::AuditConfig config;
  config.thresholds.di_good = opts.di_good;
  config.thresholds.pd_flag = opts.pd_flag;
  config.thresholds.baseline_label = opts.baseline;
  config.policy = policy_from(opts.common);
  config.zero_ref_fallback = zero_ref_from(opts.common);
  if (!opts.metrics.empty()) {
    config.metrics.clear();
    for (const auto& name : opts.metrics) {
      config.metrics.push_back(fairsynth::metric_by_name(name));
    }
  }

  const fairsynth::AuditReport report = fairsynth::audit(records, opts.dimension, config);
  print_issues(report.warnings, "warning");
  if (opts.common.strict && !report.warnings.empty()) {
    std::cerr << "error: warnings escalated by --strict\n";
    return kExitDataError;
  }
  write_output(opts.common.out_path,
               fairsynth::render_fairness_table(report, render_format(opts.output_format),
                                                actions_from(opts.actions_path)));
  if (report.any_flagged() && !opts.no_gate) {
    std::cerr << "bias gate: at least one (metric, group) cell is flagged\n";
    return kExitGate;
  }
  return kExitOk;
}

struct CompareOptions {
  std::string results_path;
  std::string base;
  std::string other;
  std::string convention = "old";
  std::string output_format = "md";
  std::string out_path;
};

std::string signed2(double value) {
  const std::string text = fairsynth::format_round2(value);
  return value > 0 && text[0] != '-' ? "+" + text : text;
}

int cmd_compare(const CompareOptions& opts) {
  const auto table = fairsynth::load_result_table_file(opts.results_path);
  const auto convention = opts.convention == "new"
                              ? fairsynth::ChangeConvention::relative_to_new
                              : fairsynth::ChangeConvention::relative_to_old;
  std::vector<std::pair<std::string, std::string>> warnings;
  const auto changes =
      fairsynth::compare_conditions(table, opts.base, opts.other, convention, &warnings);
  print_issues(warnings, "warning");

  const std::string convention_name = fairsynth::to_string(convention);
  std::string out;
  if (opts.output_format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [category, change] : changes) {
      rows.push_back({{"category", category},
                      {"base_value", table.at(opts.base, category)},
                      {"other_value", table.at(opts.other, category)},
                      {"change_percent", change}});
    }
    const nlohmann::json doc{{"task", table.task},
                             {"base", opts.base},
                             {"other", opts.other},
                             {"convention", convention_name},
                             {"changes", rows}};
    out = doc.dump(2) + "\n";
  } else if (opts.output_format == "csv") {
    out = "category,base_value,other_value,change_percent,convention\r\n";
    for (const auto& [category, change] : changes) {
      out += category + "," + fairsynth::format_round2(table.at(opts.base, category)) + "," +
             fairsynth::format_round2(table.at(opts.other, category)) + "," + signed2(change) +
             "," + convention_name + "\r\n";
    }
  } else {
    out = "# " + (table.task.empty() ? std::string("comparison") : table.task) + ": " +
          opts.base + " vs " + opts.other + " (" + convention_name + ")\n\n";
    out += "| category | " + opts.base + " | " + opts.other + " | change % |\n";
    out += "|---|---:|---:|---:|\n";
    for (const auto& [category, change] : changes) {
      out += "| " + category + " | " + fairsynth::format_round2(table.at(opts.base, category)) +
             " | " + fairsynth::format_round2(table.at(opts.other, category)) + " | " +
             signed2(change) + " |\n";
    }
  }
  write_output(opts.out_path, out);
  return kExitOk;
}

struct ReportOptions {
  std::string report_path;
  std::string what = "table";
  std::string output_format = "md";
  std::string out_path;
  std::string actions_path;
};

int cmd_report(const ReportOptions& opts) {
  std::ifstream in(opts.report_path, std::ios::binary);
  if (!in) throw fairsynth::InputError("cannot open report '" + opts.report_path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const fairsynth::AuditReport report = fairsynth::parse_report_json(buffer.str());
  const fairsynth::ActionTable actions = actions_from(opts.actions_path);

  std::string out;
  if (opts.what == "plot") {
    out = fairsynth::emit_plot_data(report.stats);
  } else if (opts.what == "insights") {
    out = fairsynth::render_key_insights(report, render_format(opts.output_format), actions);
  } else {
    out = fairsynth::render_fairness_table(report, render_format(opts.output_format), actions);
  }
  write_output(opts.out_path, out);
  return kExitOk;
}

void add_common_options(CLI::App* cmd, CommonOptions& opts, bool with_manifest = true) {
  if (with_manifest) {
    cmd->add_option("--manifest", opts.manifest_path, "Manifest file (JSONL or CSV)")
        ->required();
    cmd->add_option("--format", opts.format, "Manifest format; default by file extension")
        ->check(CLI::IsMember({"jsonl", "csv"}));
  }
  cmd->add_option("--out", opts.out_path, "Output path (default: stdout)");
  cmd->add_flag("--strict", opts.strict, "Treat warnings as errors");
  cmd->add_flag("--no-lowercase", opts.no_lowercase, "Keep letter case before scoring");
  cmd->add_flag("--no-strip-punctuation", opts.no_strip_punctuation,
                "Keep punctuation before scoring");
  cmd->add_flag("--no-collapse-whitespace", opts.no_collapse_whitespace,
                "Keep whitespace runs before scoring");
  cmd->add_option("--zero-ref-fallback", opts.zero_ref,
                  "Rate for an empty reference with a non-empty hypothesis")
      ->check(CLI::IsMember({"error", "hyp-length"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fairness evaluation toolkit for zero-shot speech cloning pipelines"};
  app.set_version_flag("--version", std::string("fairsynth ") + fairsynth::kVersion);
  app.set_config("--config", "",
                 "Config file mirroring the flags, one [section] per subcommand (flags win)");
  app.require_subcommand(1);

  CommonOptions score_opts;
  CLI::App* score = app.add_subcommand("score", "Per-utterance metrics as JSONL");
  score->fallthrough();
  add_common_options(score, score_opts);

  AuditOptions audit_opts;
  CLI::App* audit = app.add_subcommand("audit", "Group fairness audit");
  audit->fallthrough();
  add_common_options(audit, audit_opts.common);
  audit->add_option("--dimension", audit_opts.dimension, "Group dimension to audit")
      ->required();
  audit->add_option("--baseline", audit_opts.baseline, "Baseline group label");
  audit->add_option("--metrics", audit_opts.metrics, "Metrics to audit")->delimiter(',');
  audit->add_option("--di-good", audit_opts.di_good, "DI threshold for level Good")
      ->check(CLI::Range(1e-9, 1.0));
  audit->add_option("--pd-flag", audit_opts.pd_flag, "PD threshold that flags a cell")
      ->check(CLI::NonNegativeNumber);
  audit->add_option("--output-format", audit_opts.output_format, "Report format")
      ->check(CLI::IsMember({"md", "csv", "json"}));
  audit->add_option("--actions", audit_opts.actions_path, "Action table override (JSON)");
  audit->add_flag("--no-gate", audit_opts.no_gate, "Do not exit 3 on flagged cells");

  CompareOptions compare_opts;
  CLI::App* compare = app.add_subcommand("compare", "Compare downstream-task conditions");
  compare->fallthrough();
  compare->add_option("--results", compare_opts.results_path, "Result table JSON")->required();
  compare->add_option("--base", compare_opts.base, "Base condition")->required();
  compare->add_option("--other", compare_opts.other, "Other condition")->required();
  compare->add_option("--convention", compare_opts.convention,
                      "Change convention: old=(new-old)/old, new=(old-new)/new")
      ->check(CLI::IsMember({"old", "new"}));
  compare->add_option("--output-format", compare_opts.output_format, "Output format")
      ->check(CLI::IsMember({"md", "csv", "json"}));
  compare->add_option("--out", compare_opts.out_path, "Output path (default: stdout)");

  ReportOptions report_opts;
  CLI::App* report = app.add_subcommand("report", "Re-render a saved audit report");
  report->fallthrough();
  report->add_option("--report", report_opts.report_path, "Audit report JSON")->required();
  report->add_option("--what", report_opts.what, "What to render")
      ->check(CLI::IsMember({"table", "insights", "plot"}));
  report->add_option("--output-format", report_opts.output_format, "Output format")
      ->check(CLI::IsMember({"md", "csv", "json"}));
  report->add_option("--out", report_opts.out_path, "Output path (default: stdout)");
  report->add_option("--actions", report_opts.actions_path, "Action table override (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (score->parsed()) return cmd_score(score_opts);
    if (audit->parsed()) return cmd_audit(audit_opts);
    if (compare->parsed()) return cmd_compare(compare_opts);
    return cmd_report(report_opts);
  } catch (const fairsynth::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

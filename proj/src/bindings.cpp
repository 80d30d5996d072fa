#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fairsynth/downstream.hpp"
#include "fairsynth/fairness.hpp"
#include "fairsynth/manifest.hpp"
#include "fairsynth/report.hpp"
#include "fairsynth/simmetrics.hpp"
#include "fairsynth/textmetrics.hpp"
#include "fairsynth/version.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace fairsynth;

namespace {

ManifestFormat format_from(const std::string& name) {
  if (name == "csv") return ManifestFormat::csv;
  if (name == "jsonl") return ManifestFormat::jsonl;
  throw InputError("unknown manifest format '" + name + "'");
}

RenderFormat render_format_from(const std::string& name) {
  if (name == "md" || name == "markdown") return RenderFormat::markdown;
  if (name == "csv") return RenderFormat::csv;
  if (name == "json") return RenderFormat::json;
  throw InputError("unknown render format '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fairness evaluation toolkit for zero-shot speech cloning pipelines";

  py::register_exception<Error>(m, "FairsynthError", PyExc_ValueError);

  py::class_<UtteranceRecord>(m, "UtteranceRecord")
      .def(py::init<>())
      .def_readwrite("utt_id", &UtteranceRecord::utt_id)
      .def_readwrite("speaker_id", &UtteranceRecord::speaker_id)
      .def_readwrite("groups", &UtteranceRecord::groups)
      .def_readwrite("ref_text", &UtteranceRecord::ref_text)
      .def_readwrite("hyp_prompt_text", &UtteranceRecord::hyp_prompt_text)
      .def_readwrite("hyp_generated_text", &UtteranceRecord::hyp_generated_text)
      .def_readwrite("embedding_prompt", &UtteranceRecord::embedding_prompt)
      .def_readwrite("embedding_generated", &UtteranceRecord::embedding_generated)
      .def_readwrite("simo_precomputed", &UtteranceRecord::simo_precomputed)
      .def_readwrite("autopcp", &UtteranceRecord::autopcp)
      .def("__repr__", [](const UtteranceRecord& r) {
        return "UtteranceRecord(utt_id='" + r.utt_id + "')";
      });

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("record_count", &ValidationReport::record_count)
      .def_readonly("errors", &ValidationReport::errors)
      .def_readonly("warnings", &ValidationReport::warnings)
      .def("accepted", &ValidationReport::accepted);

  py::class_<NormalizationPolicy>(m, "NormalizationPolicy")
      .def(py::init<>())
      .def_readwrite("lowercase", &NormalizationPolicy::lowercase)
      .def_readwrite("strip_punctuation", &NormalizationPolicy::strip_punctuation)
      .def_readwrite("collapse_whitespace", &NormalizationPolicy::collapse_whitespace);

  py::class_<AlignmentCounts>(m, "AlignmentCounts")
      .def(py::init<>())
      .def_readwrite("substitutions", &AlignmentCounts::substitutions)
      .def_readwrite("deletions", &AlignmentCounts::deletions)
      .def_readwrite("insertions", &AlignmentCounts::insertions)
      .def_readwrite("correct", &AlignmentCounts::correct)
      .def_readwrite("ref_len", &AlignmentCounts::ref_len)
      .def("edits", &AlignmentCounts::edits);

  py::class_<UtteranceMetrics>(m, "UtteranceMetrics")
      .def_readonly("utt_id", &UtteranceMetrics::utt_id)
      .def_readonly("wer_prompt", &UtteranceMetrics::wer_prompt)
      .def_readonly("wer_generated", &UtteranceMetrics::wer_generated)
      .def_readonly("cer_prompt", &UtteranceMetrics::cer_prompt)
      .def_readonly("cer_generated", &UtteranceMetrics::cer_generated)
      .def_readonly("delta_wer", &UtteranceMetrics::delta_wer)
      .def_readonly("delta_cer", &UtteranceMetrics::delta_cer)
      .def_readonly("simo", &UtteranceMetrics::simo)
      .def_readonly("autopcp", &UtteranceMetrics::autopcp);

  py::class_<GroupKey>(m, "GroupKey")
      .def(py::init<std::string_view, std::string_view>(), py::arg("dimension"),
           py::arg("label"))
      .def_readonly("dimension", &GroupKey::dimension)
      .def_readonly("label", &GroupKey::label)
      .def("__eq__", [](const GroupKey& a, const GroupKey& b) { return a == b; })
      .def("__repr__", [](const GroupKey& k) {
        return "GroupKey('" + k.dimension + "', '" + k.label + "')";
      });

  py::class_<Thresholds>(m, "Thresholds")
      .def(py::init<>())
      .def_readwrite("di_good", &Thresholds::di_good)
      .def_readwrite("pd_flag", &Thresholds::pd_flag)
      .def_readwrite("baseline_label", &Thresholds::baseline_label);

  py::enum_<MetricPolarity>(m, "MetricPolarity")
      .value("delta", MetricPolarity::delta)
      .value("ratio", MetricPolarity::ratio);

  py::class_<MetricKind>(m, "MetricKind")
      .def(py::init<std::string, MetricPolarity>(), py::arg("name"), py::arg("polarity"))
      .def_readwrite("name", &MetricKind::name)
      .def_readwrite("polarity", &MetricKind::polarity);

  py::enum_<FairnessLevel>(m, "FairnessLevel")
      .value("good", FairnessLevel::good)
      .value("poor", FairnessLevel::poor);

  py::class_<GroupStats>(m, "GroupStats")
      .def_readonly("group", &GroupStats::group)
      .def_readonly("metric", &GroupStats::metric)
      .def_readonly("mean", &GroupStats::mean)
      .def_readonly("count", &GroupStats::count);

  py::class_<FairnessRow>(m, "FairnessRow")
      .def_readonly("group", &FairnessRow::group)
      .def_readonly("metric", &FairnessRow::metric)
      .def_readonly("pd", &FairnessRow::pd)
      .def_readonly("di", &FairnessRow::di)
      .def_readonly("level", &FairnessRow::level)
      .def_readonly("flagged", &FairnessRow::flagged)
      .def_readonly("count", &FairnessRow::count);

  py::class_<AuditReport>(m, "AuditReport")
      .def_readonly("dimension", &AuditReport::dimension)
      .def_readonly("baseline", &AuditReport::baseline)
      .def_readonly("rows", &AuditReport::rows)
      .def_readonly("stats", &AuditReport::stats)
      .def_readonly("tool_version", &AuditReport::tool_version)
      .def_readonly("input_digest", &AuditReport::input_digest)
      .def_readonly("unlabeled_count", &AuditReport::unlabeled_count)
      .def_readonly("warnings", &AuditReport::warnings)
      .def("any_flagged", &AuditReport::any_flagged)
      .def("to_json",
           [](const AuditReport& r) { return render_fairness_table(r, RenderFormat::json); })
      .def("to_markdown", [](const AuditReport& r) {
        return render_fairness_table(r, RenderFormat::markdown);
      });

  // manifest
  m.def(
      "parse_manifest",
      [](const std::string& text, const std::string& format) {
        ParsedManifest parsed = parse_manifest(std::string_view(text), format_from(format));
        return py::make_tuple(parsed.records, parsed.report);
      },
      py::arg("text"), py::arg("format") = "jsonl",
      "Parse manifest text; returns (records, validation_report).");
  m.def(
      "parse_manifest_file",
      [](const std::string& path, const std::optional<std::string>& format) {
        std::optional<ManifestFormat> fmt;
        if (format) fmt = format_from(*format);
        ParsedManifest parsed = parse_manifest_file(path, fmt);
        return py::make_tuple(parsed.records, parsed.report);
      },
      py::arg("path"), py::arg("format") = py::none());
  m.def("validate_records", &validate_records, py::arg("records"));
  m.def("serialize_records", &serialize_records, py::arg("records"));

  // textmetrics
  m.def(
      "normalize_and_tokenize",
      [](std::string_view raw, const NormalizationPolicy& policy, const std::string& level) {
        return normalize_and_tokenize(
            raw, policy, level == "char" ? TokenLevel::character : TokenLevel::word);
      },
      py::arg("raw"), py::arg("policy") = NormalizationPolicy{}, py::arg("level") = "word");
  m.def(
      "align",
      [](const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
        return align(ref, hyp);
      },
      py::arg("ref_tokens"), py::arg("hyp_tokens"));
  m.def(
      "error_rate",
      [](const AlignmentCounts& counts, const std::string& fallback) {
        return error_rate(counts, fallback == "hyp-length"
                                      ? ZeroRefFallback::hypothesis_length
                                      : ZeroRefFallback::error);
      },
      py::arg("counts"), py::arg("zero_ref_fallback") = "error");
  m.def("delta_metric", &delta_metric, py::arg("prompt_rate"), py::arg("generated_rate"));
  m.def(
      "score_utterance",
      [](const UtteranceRecord& record, const NormalizationPolicy& policy) {
        return score_utterance(record, policy);
      },
      py::arg("record"), py::arg("policy") = NormalizationPolicy{});

  // simmetrics
  m.def(
      "cosine_similarity",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return cosine_similarity(a, b);
      },
      py::arg("a"), py::arg("b"));
  m.def("resolve_simo",
        [](const UtteranceRecord& record) { return resolve_simo(record, nullptr); });
  m.def("resolve_autopcp", &resolve_autopcp);

  // fairness
  m.def("default_metrics", &default_metrics);
  m.def("metric_by_name", &metric_by_name, py::arg("name"));
  m.def(
      "group_mean", [](std::vector<double> values) { return group_mean(std::move(values)); },
      py::arg("values"));
  m.def("parity_difference", &parity_difference, py::arg("baseline_mean"),
        py::arg("group_mean"));
  m.def("softmax_normalize", &softmax_normalize, py::arg("means"),
        "means: ordered list of (GroupKey, mean) pairs");
  m.def("disparate_impact", &disparate_impact, py::arg("metric"), py::arg("means"),
        py::arg("baseline"));
  m.def(
      "classify",
      [](double pd, double di, const Thresholds& thresholds) {
        auto [level, flagged] = classify(pd, di, thresholds);
        return py::make_tuple(level, flagged);
      },
      py::arg("pd"), py::arg("di"), py::arg("thresholds") = Thresholds{});
  m.def(
      "audit",
      [](const std::vector<UtteranceRecord>& records, const std::string& dimension,
         const std::optional<std::vector<std::string>>& metrics, const Thresholds& thresholds,
         const NormalizationPolicy& policy) {
        AuditConfig config;
        config.thresholds = thresholds;
        config.policy = policy;
        if (metrics) {
          config.metrics.clear();
          for (const auto& name : *metrics) config.metrics.push_back(metric_by_name(name));
        }
        return audit(records, dimension, config);
      },
      py::arg("records"), py::arg("dimension"), py::arg("metrics") = py::none(),
      py::arg("thresholds") = Thresholds{}, py::arg("policy") = NormalizationPolicy{});

  // report
  m.def(
      "render_fairness_table",
      [](const AuditReport& report, const std::string& format) {
        return render_fairness_table(report, render_format_from(format));
      },
      py::arg("report"), py::arg("format") = "md");
  m.def(
      "render_key_insights",
      [](const AuditReport& report, const std::string& format) {
        return render_key_insights(report, render_format_from(format));
      },
      py::arg("report"), py::arg("format") = "md");
  m.def(
      "emit_plot_data", [](const AuditReport& report) { return emit_plot_data(report.stats); },
      py::arg("report"));
  m.def("parse_report_json",
        [](const std::string& text) { return parse_report_json(text); });
  m.def("round_half_up", &round_half_up, py::arg("value"), py::arg("digits") = 2);

  // downstream
  py::class_<TaskResultTable>(m, "TaskResultTable")
      .def_readonly("task", &TaskResultTable::task)
      .def_readonly("conditions", &TaskResultTable::conditions)
      .def_readonly("categories", &TaskResultTable::categories)
      .def_readonly("cells", &TaskResultTable::cells)
      .def("at", &TaskResultTable::at, py::arg("condition"), py::arg("category"));
  m.def("load_result_table",
        [](const std::string& text) { return load_result_table(text); });
  m.def("load_result_table_file", &load_result_table_file, py::arg("path"));
  m.def(
      "relative_change",
      [](double old_value, double new_value, const std::string& convention) {
        return relative_change(old_value, new_value,
                               convention == "new" ? ChangeConvention::relative_to_new
                                                   : ChangeConvention::relative_to_old);
      },
      py::arg("old_value"), py::arg("new_value"), py::arg("convention") = "old");
  m.def(
      "compare_conditions",
      [](const TaskResultTable& table, const std::string& base, const std::string& other,
         const std::string& convention) {
        return compare_conditions(table, base, other,
                                  convention == "new" ? ChangeConvention::relative_to_new
                                                      : ChangeConvention::relative_to_old,
                                  nullptr);
      },
      py::arg("table"), py::arg("base"), py::arg("other"), py::arg("convention") = "old");

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = fairsynth::kVersion;
#endif
}

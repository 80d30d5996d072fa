#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairsynth/errors.hpp"

namespace fairsynth {

// One evaluation unit: the reference transcript plus whatever model outputs
// (ASR hypotheses, speaker embeddings, precomputed scores) exist for it.
// All string fields are NFC-normalized at parse time.
struct UtteranceRecord {
  std::string utt_id;
  std::string speaker_id;
  std::map<std::string, std::string> groups;  // dimension name -> group label
  std::string ref_text;
  std::optional<std::string> hyp_prompt_text;
  std::optional<std::string> hyp_generated_text;
  std::optional<std::vector<double>> embedding_prompt;
  std::optional<std::vector<double>> embedding_generated;
  std::optional<double> simo_precomputed;  // in [-1, 1]
  std::optional<double> autopcp;           // >= 0
  nlohmann::json extra = nlohmann::json::object();  // unknown manifest fields

  bool operator==(const UtteranceRecord&) const = default;
};

// Identifies one group bucket within a partition dimension. Both fields are
// NFC-normalized on construction so comparison is byte equality.
struct GroupKey {
  GroupKey() = default;
  GroupKey(std::string_view dimension, std::string_view label);

  std::string dimension;
  std::string label;

  bool operator==(const GroupKey&) const = default;
  auto operator<=>(const GroupKey&) const = default;
};

// Outcome of parsing or validating a manifest. Errors and warnings are data,
// keyed by utt_id or "line N"; a manifest is accepted iff `errors` is empty.
struct ValidationReport {
  std::size_t record_count = 0;
  std::vector<std::pair<std::string, std::string>> errors;
  std::vector<std::pair<std::string, std::string>> warnings;

  bool accepted() const { return errors.empty(); }
  void merge(const ValidationReport& other);
};

enum class ManifestFormat { jsonl, csv };

struct ParsedManifest {
  std::vector<UtteranceRecord> records;  // order preserved from the input
  ValidationReport report;
};

// Parses a JSONL or CSV manifest. Structural problems (bad JSON, wrong field
// types, duplicate utt_ids, malformed CSV) land in the report as errors
// carrying line numbers; parsing continues past them where possible.
ParsedManifest parse_manifest(std::istream& source, ManifestFormat format);
ParsedManifest parse_manifest(std::string_view text, ManifestFormat format);
ParsedManifest parse_manifest_file(const std::string& path,
                                   std::optional<ManifestFormat> format = std::nullopt);

// Enforces the record invariants (unique non-empty utt_id, paired embeddings
// of equal length, scores in range, non-empty group labels) and warns about
// records with no scorable input at all.
ValidationReport validate_records(const std::vector<UtteranceRecord>& records);

// Canonical JSONL serialization (sorted keys, one record per line). Feeding
// the output back through parse_manifest yields structurally equal records.
std::string serialize_records(const std::vector<UtteranceRecord>& records);
nlohmann::json record_to_json(const UtteranceRecord& record);

struct Partition {
  // Buckets ordered by the configured label order, then lexicographically.
  std::vector<std::pair<GroupKey, std::vector<UtteranceRecord>>> buckets;
  // Records that do not carry the dimension; excluded from fairness math.
  std::vector<UtteranceRecord> unlabeled;
};

// Standard severity ordering: healthy, low, mid, high.
const std::vector<std::string>& default_label_order();

// Splits records by their label under `dimension`. Labels in `label_order`
// come first (in that order); remaining labels follow lexicographically.
Partition partition_by_group(const std::vector<UtteranceRecord>& records,
                             std::string_view dimension,
                             const std::vector<std::string>& label_order = default_label_order());

}  // namespace fairsynth

#include "fairsynth/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "fairsynth/unicode.hpp"

namespace fairsynth {

namespace {

using nlohmann::json;

const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields = {
      "utt_id",           "speaker_id",          "groups",
      "ref_text",         "hyp_prompt_text",     "hyp_generated_text",
      "embedding_prompt", "embedding_generated", "simo_precomputed",
      "autopcp"};
  return fields;
}

std::string line_key(std::size_t line) { return "line " + std::to_string(line); }

std::optional<std::string> opt_string_field(const json& obj, const char* name,
                                            ValidationReport& report, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    report.errors.emplace_back(line_key(line),
                               std::string("field '") + name + "' must be a string");
    return std::nullopt;
  }
  return nfc_normalize(it->get<std::string>());
}

std::optional<double> opt_number_field(const json& obj, const char* name,
                                       ValidationReport& report, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    report.errors.emplace_back(line_key(line),
                               std::string("field '") + name + "' must be a number");
    return std::nullopt;
  }
  return it->get<double>();
}

std::optional<std::vector<double>> opt_vector_field(const json& obj, const char* name,
                                                    ValidationReport& report,
                                                    std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) {
    report.errors.emplace_back(line_key(line),
                               std::string("field '") + name + "' must be an array of numbers");
    return std::nullopt;
  }
  std::vector<double> values;
  values.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) {
      report.errors.emplace_back(line_key(line),
                                 std::string("field '") + name + "' must be an array of numbers");
      return std::nullopt;
    }
    values.push_back(v.get<double>());
  }
  return values;
}

// Builds a record from one parsed JSON object. Shared by the JSONL reader and
// the CSV reader (which synthesizes the same object shape).
std::optional<UtteranceRecord> record_from_json(const json& obj, std::size_t line,
                                                ValidationReport& report) {
  if (!obj.is_object()) {
    report.errors.emplace_back(line_key(line), "manifest line is not a JSON object");
    return std::nullopt;
  }
  const std::size_t errors_before = report.errors.size();

  UtteranceRecord rec;
  if (auto it = obj.find("utt_id"); it == obj.end() || it->is_null()) {
    report.errors.emplace_back(line_key(line), "missing or empty utt_id");
  } else if (!it->is_string()) {
    report.errors.emplace_back(line_key(line), "field 'utt_id' must be a string");
  } else if (rec.utt_id = nfc_normalize(it->get<std::string>()); rec.utt_id.empty()) {
    report.errors.emplace_back(line_key(line), "missing or empty utt_id");
  }
  if (auto v = opt_string_field(obj, "speaker_id", report, line)) rec.speaker_id = *v;
  rec.ref_text = opt_string_field(obj, "ref_text", report, line).value_or("");
  rec.hyp_prompt_text = opt_string_field(obj, "hyp_prompt_text", report, line);
  rec.hyp_generated_text = opt_string_field(obj, "hyp_generated_text", report, line);
  rec.embedding_prompt = opt_vector_field(obj, "embedding_prompt", report, line);
  rec.embedding_generated = opt_vector_field(obj, "embedding_generated", report, line);
  rec.simo_precomputed = opt_number_field(obj, "simo_precomputed", report, line);
  rec.autopcp = opt_number_field(obj, "autopcp", report, line);

  if (auto it = obj.find("groups"); it != obj.end() && !it->is_null()) {
    if (!it->is_object()) {
      report.errors.emplace_back(line_key(line), "field 'groups' must be an object");
    } else {
      for (const auto& [dim, label] : it->items()) {
        if (!label.is_string()) {
          report.errors.emplace_back(line_key(line),
                                     "group '" + dim + "' label must be a string");
          continue;
        }
        rec.groups[nfc_normalize(dim)] = nfc_normalize(label.get<std::string>());
      }
    }
  }

  for (const auto& [key, value] : obj.items()) {
    if (!known_fields().contains(key)) rec.extra[key] = value;
  }

  if (report.errors.size() != errors_before) return std::nullopt;
  return rec;
}

ParsedManifest parse_jsonl(std::istream& in) {
  ParsedManifest out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
      line.erase(0, 3);
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    if (!utf8_valid(line)) {
      out.report.errors.emplace_back(line_key(line_no), "line is not valid UTF-8");
      continue;
    }
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) {
      out.report.errors.emplace_back(line_key(line_no), "malformed JSON");
      continue;
    }
    if (auto rec = record_from_json(obj, line_no, out.report)) {
      out.records.push_back(std::move(*rec));
    }
  }
  return out;
}

// --- CSV ---------------------------------------------------------------
//
// RFC 4180 reader: quoted cells, doubled quotes, embedded newlines. Returns
// one row of cells; `line_no` advances past every consumed physical line.
bool read_csv_row(std::istream& in, std::vector<std::string>& cells, std::size_t& line_no) {
  cells.clear();
  if (in.peek() == EOF) return false;
  ++line_no;
  std::string cell;
  bool quoted = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          cell.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line_no;
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  if (!any) return false;
  cells.push_back(std::move(cell));
  return true;
}

std::optional<std::vector<double>> parse_embedding_cell(const std::string& cell,
                                                        const std::string& column,
                                                        ValidationReport& report,
                                                        std::size_t line) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= cell.size()) {
    std::size_t end = cell.find(';', start);
    if (end == std::string::npos) end = cell.size();
    const char* first = cell.data() + start;
    const char* last = cell.data() + end;
    while (first < last && *first == ' ') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      report.errors.emplace_back(line_key(line),
                                 "column '" + column + "': malformed embedding value");
      return std::nullopt;
    }
    values.push_back(v);
    start = end + 1;
  }
  return values;
}

ParsedManifest parse_csv(std::istream& in) {
  ParsedManifest out;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  if (!read_csv_row(in, header, line_no)) {
    out.report.warnings.emplace_back("manifest", "no records");
    return out;
  }
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  std::vector<std::string> cells;
  while (read_csv_row(in, cells, line_no)) {
    const std::size_t row_line = line_no;
    if (cells.size() == 1 && cells[0].empty()) continue;
    if (cells.size() != header.size()) {
      out.report.errors.emplace_back(
          line_key(row_line), "row has " + std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(header.size()));
      continue;
    }
    bool valid_utf8 = true;
    for (const auto& c : cells) {
      if (!utf8_valid(c)) {
        out.report.errors.emplace_back(line_key(row_line), "row is not valid UTF-8");
        valid_utf8 = false;
        break;
      }
    }
    if (!valid_utf8) continue;

    // Synthesize the JSONL object shape so both formats share one record
    // builder. Empty cells mean "absent".
    json obj = json::object();
    bool row_ok = true;
    for (std::size_t i = 0; i < header.size(); ++i) {
      const std::string& column = header[i];
      const std::string& cell = cells[i];
      if (cell.empty()) continue;
      if (column == "embedding_prompt" || column == "embedding_generated") {
        auto values = parse_embedding_cell(cell, column, out.report, row_line);
        if (!values) {
          row_ok = false;
          break;
        }
        obj[column] = *values;
      } else if (column == "simo_precomputed" || column == "autopcp") {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
          out.report.errors.emplace_back(line_key(row_line),
                                         "column '" + column + "': malformed number");
          row_ok = false;
          break;
        }
        obj[column] = v;
      } else if (column.rfind("group.", 0) == 0) {
        obj["groups"][column.substr(6)] = cell;
      } else {
        obj[column] = cell;  // known string fields and unknown extras alike
      }
    }
    if (!row_ok) continue;
    if (auto rec = record_from_json(obj, row_line, out.report)) {
      out.records.push_back(std::move(*rec));
    }
  }
  return out;
}

void check_duplicates(ParsedManifest& manifest) {
  std::set<std::string> seen;
  std::set<std::string> reported;
  for (const auto& rec : manifest.records) {
    if (!seen.insert(rec.utt_id).second && reported.insert(rec.utt_id).second) {
      manifest.report.errors.emplace_back(rec.utt_id,
                                          "duplicate utt_id '" + rec.utt_id + "'");
    }
  }
}

}  // namespace

GroupKey::GroupKey(std::string_view dimension_in, std::string_view label_in)
    : dimension(nfc_normalize(dimension_in)), label(nfc_normalize(label_in)) {}

void ValidationReport::merge(const ValidationReport& other) {
  record_count = std::max(record_count, other.record_count);
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

ParsedManifest parse_manifest(std::istream& source, ManifestFormat format) {
  ParsedManifest out =
      format == ManifestFormat::jsonl ? parse_jsonl(source) : parse_csv(source);
  check_duplicates(out);
  out.report.record_count = out.records.size();
  if (out.records.empty() && out.report.errors.empty()) {
    out.report.warnings.emplace_back("manifest", "no records");
  }
  return out;
}

ParsedManifest parse_manifest(std::string_view text, ManifestFormat format) {
  std::istringstream in{std::string(text)};
  return parse_manifest(in, format);
}

ParsedManifest parse_manifest_file(const std::string& path,
                                   std::optional<ManifestFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open manifest '" + path + "'");
  ManifestFormat fmt = format.value_or(
      path.size() >= 4 && path.rfind(".csv") == path.size() - 4 ? ManifestFormat::csv
                                                                : ManifestFormat::jsonl);
  return parse_manifest(in, fmt);
}

ValidationReport validate_records(const std::vector<UtteranceRecord>& records) {
  ValidationReport report;
  report.record_count = records.size();
  std::set<std::string> seen;
  for (const auto& rec : records) {
    const std::string key = rec.utt_id.empty() ? std::string("<blank utt_id>") : rec.utt_id;
    if (rec.utt_id.empty()) {
      report.errors.emplace_back(key, "empty utt_id");
    } else if (!seen.insert(rec.utt_id).second) {
      report.errors.emplace_back(key, "duplicate utt_id '" + rec.utt_id + "'");
    }
    for (const auto& [dim, label] : rec.groups) {
      if (dim.empty()) report.errors.emplace_back(key, "empty group dimension name");
      if (label.empty()) {
        report.errors.emplace_back(key, "empty label for group dimension '" + dim + "'");
      }
    }
    const bool has_prompt_emb = rec.embedding_prompt.has_value();
    const bool has_generated_emb = rec.embedding_generated.has_value();
    if (has_prompt_emb != has_generated_emb) {
      report.errors.emplace_back(key, "embedding present for only one side of the pair");
    } else if (has_prompt_emb) {
      if (rec.embedding_prompt->empty() || rec.embedding_generated->empty()) {
        report.errors.emplace_back(key, "empty embedding vector");
      } else if (rec.embedding_prompt->size() != rec.embedding_generated->size()) {
        report.errors.emplace_back(
            key, "embedding length mismatch (" +
                     std::to_string(rec.embedding_prompt->size()) + " vs " +
                     std::to_string(rec.embedding_generated->size()) + ")");
      } else {
        auto zero_norm = [](const std::vector<double>& v) {
          return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
        };
        if (zero_norm(*rec.embedding_prompt) || zero_norm(*rec.embedding_generated)) {
          report.errors.emplace_back(key, "zero-norm embedding");
        }
      }
    }
    if (rec.simo_precomputed && (*rec.simo_precomputed < -1.0 || *rec.simo_precomputed > 1.0)) {
      report.errors.emplace_back(key, "SIM-o outside [-1,1]");
    }
    if (rec.autopcp && *rec.autopcp < 0.0) {
      report.errors.emplace_back(key, "AutoPCP score is negative");
    }
    const bool has_hyp_pair = rec.hyp_prompt_text || rec.hyp_generated_text;
    const bool scorable = has_hyp_pair || has_prompt_emb || rec.simo_precomputed || rec.autopcp;
    if (!scorable) {
      report.warnings.emplace_back(key, "record has no scorable input");
    }
  }
  return report;
}

nlohmann::json record_to_json(const UtteranceRecord& record) {
  json obj = json::object();
  obj["utt_id"] = record.utt_id;
  obj["speaker_id"] = record.speaker_id;
  obj["ref_text"] = record.ref_text;
  obj["groups"] = record.groups;
  if (record.hyp_prompt_text) obj["hyp_prompt_text"] = *record.hyp_prompt_text;
  if (record.hyp_generated_text) obj["hyp_generated_text"] = *record.hyp_generated_text;
  if (record.embedding_prompt) obj["embedding_prompt"] = *record.embedding_prompt;
  if (record.embedding_generated) obj["embedding_generated"] = *record.embedding_generated;
  if (record.simo_precomputed) obj["simo_precomputed"] = *record.simo_precomputed;
  if (record.autopcp) obj["autopcp"] = *record.autopcp;
  for (const auto& [key, value] : record.extra.items()) obj[key] = value;
  return obj;
}

std::string serialize_records(const std::vector<UtteranceRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    out += record_to_json(rec).dump();
    out += '\n';
  }
  return out;
}

const std::vector<std::string>& default_label_order() {
  static const std::vector<std::string> order = {"healthy", "low", "mid", "high"};
  return order;
}

Partition partition_by_group(const std::vector<UtteranceRecord>& records,
                             std::string_view dimension,
                             const std::vector<std::string>& label_order) {
  if (dimension.empty()) throw InputError("partition dimension must be non-empty");
  const std::string dim = nfc_normalize(dimension);

  std::map<std::string, std::vector<UtteranceRecord>> by_label;
  Partition out;
  for (const auto& rec : records) {
    auto it = rec.groups.find(dim);
    if (it == rec.groups.end()) {
      out.unlabeled.push_back(rec);
    } else {
      by_label[it->second].push_back(rec);
    }
  }

  // Configured labels first, remaining labels lexicographically.
  for (const auto& label : label_order) {
    auto it = by_label.find(nfc_normalize(label));
    if (it == by_label.end()) continue;
    out.buckets.emplace_back(GroupKey(dim, it->first), std::move(it->second));
    by_label.erase(it);
  }
  for (auto& [label, bucket] : by_label) {
    out.buckets.emplace_back(GroupKey(dim, label), std::move(bucket));
  }
  return out;
}

}  // namespace fairsynth

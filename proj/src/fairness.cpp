#include "fairsynth/fairness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>

#include "fairsynth/version.hpp"

namespace fairsynth {

namespace {

std::optional<double> extract_metric(const MetricKind& metric, const UtteranceRecord& record,
                                     const UtteranceMetrics& scored) {
  if (metric.name == "delta_wer") return scored.delta_wer;
  if (metric.name == "delta_cer") return scored.delta_cer;
  if (metric.name == "simo") return scored.simo;
  if (metric.name == "autopcp") return scored.autopcp;
  // Extension slot: custom metrics are read from the record's extra fields.
  if (auto it = record.extra.find(metric.name); it != record.extra.end()) {
    if (it->is_number()) return it->get<double>();
    if (it->is_string()) {
      // CSV extras arrive as strings; accept clean numeric text.
      const std::string& text = it->get_ref<const std::string&>();
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec == std::errc() && ptr == text.data() + text.size()) return value;
    }
  }
  return std::nullopt;
}

}  // namespace

const std::vector<MetricKind>& default_metrics() {
  static const std::vector<MetricKind> metrics = {
      {"delta_wer", MetricPolarity::delta},
      {"delta_cer", MetricPolarity::delta},
      {"simo", MetricPolarity::ratio},
      {"autopcp", MetricPolarity::ratio},
  };
  return metrics;
}

MetricKind metric_by_name(const std::string& name) {
  for (const auto& m : default_metrics()) {
    if (m.name == name) return m;
  }
  return {name, MetricPolarity::ratio};
}

std::string to_string(FairnessLevel level) {
  return level == FairnessLevel::good ? "Good" : "Poor";
}

void Thresholds::validate() const {
  if (!(di_good > 0.0 && di_good <= 1.0)) {
    throw InputError("di_good must be in (0, 1], got " + std::to_string(di_good));
  }
  if (!(pd_flag >= 0.0)) {
    throw InputError("pd_flag must be >= 0, got " + std::to_string(pd_flag));
  }
  if (baseline_label.empty()) throw InputError("baseline label must be non-empty");
}

double group_mean(std::vector<double> values, const std::string& group,
                  const std::string& metric) {
  if (values.empty()) throw NoDataError(group, metric);
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double parity_difference(double baseline_mean, double group_mean) {
  return std::abs(baseline_mean - group_mean);
}

MeanSeries softmax_normalize(const MeanSeries& means) {
  if (means.empty()) throw InputError("softmax over an empty group series");
  double max_mean = means.front().second;
  for (const auto& [key, m] : means) max_mean = std::max(max_mean, m);

  MeanSeries out;
  out.reserve(means.size());
  double sum = 0.0;
  for (const auto& [key, m] : means) {
    const double e = std::exp(m - max_mean);
    out.emplace_back(key, e);
    sum += e;
  }
  for (auto& [key, e] : out) e /= sum;
  return out;
}

MeanSeries disparate_impact(const MetricKind& metric, const MeanSeries& means,
                            const GroupKey& baseline) {
  auto find = [](const MeanSeries& series, const GroupKey& key) {
    return std::find_if(series.begin(), series.end(),
                        [&](const auto& entry) { return entry.first == key; });
  };
  auto baseline_it = find(means, baseline);
  if (baseline_it == means.end()) {
    throw InputError("baseline group '" + baseline.label + "' not present in mean series");
  }

  MeanSeries out;
  out.reserve(means.size());
  if (metric.polarity == MetricPolarity::delta) {
    const MeanSeries soft = softmax_normalize(means);
    const double soft_baseline = find(soft, baseline)->second;
    for (const auto& [key, s] : soft) {
      out.emplace_back(key, key == baseline ? 1.0 : soft_baseline / s);
    }
  } else {
    const double baseline_mean = baseline_it->second;
    if (baseline_mean == 0.0) {
      throw UndefinedDiError("disparate impact undefined: baseline mean is 0 for metric '" +
                             metric.name + "'");
    }
    for (const auto& [key, m] : means) {
      out.emplace_back(key, key == baseline ? 1.0 : m / baseline_mean);
    }
  }
  return out;
}

std::pair<FairnessLevel, bool> classify(double pd, double di, const Thresholds& thresholds) {
  const FairnessLevel level =
      di >= thresholds.di_good ? FairnessLevel::good : FairnessLevel::poor;
  const bool flagged = di < thresholds.di_good || pd >= thresholds.pd_flag;
  return {level, flagged};
}

bool AuditReport::any_flagged() const {
  return std::any_of(rows.begin(), rows.end(), [](const FairnessRow& r) { return r.flagged; });
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

AuditReport audit(const std::vector<UtteranceRecord>& records, std::string_view dimension,
                  const AuditConfig& config) {
  config.thresholds.validate();
  for (const auto& metric : config.metrics) {
    // Built-in metric names come with a fixed polarity.
    for (const auto& builtin : default_metrics()) {
      if (metric.name == builtin.name && metric.polarity != builtin.polarity) {
        throw InputError("metric '" + metric.name + "' has a fixed polarity");
      }
    }
  }

  AuditReport report;
  report.dimension = std::string(dimension);
  report.baseline = GroupKey(dimension, config.thresholds.baseline_label);
  report.config = config;
  report.tool_version = kVersion;

  Partition partition = partition_by_group(records, dimension, config.label_order);
  report.unlabeled_count = partition.unlabeled.size();

  const auto baseline_bucket =
      std::find_if(partition.buckets.begin(), partition.buckets.end(),
                   [&](const auto& bucket) { return bucket.first == report.baseline; });
  if (baseline_bucket == partition.buckets.end()) {
    throw InputError("baseline group '" + config.thresholds.baseline_label +
                     "' not found under dimension '" + std::string(dimension) + "'");
  }

  // Deterministic scoring order: per bucket, records sorted by utt_id.
  struct ScoredBucket {
    GroupKey group;
    std::vector<UtteranceRecord> records;
    std::vector<UtteranceMetrics> scored;
  };
  std::vector<ScoredBucket> buckets;
  buckets.reserve(partition.buckets.size());
  for (auto& [key, bucket_records] : partition.buckets) {
    ScoredBucket sb;
    sb.group = key;
    sb.records = std::move(bucket_records);
    std::sort(sb.records.begin(), sb.records.end(),
              [](const auto& a, const auto& b) { return a.utt_id < b.utt_id; });
    for (const auto& rec : sb.records) {
      sb.scored.push_back(score_utterance(rec, config.policy, config.zero_ref_fallback,
                                          &report.warnings));
    }
    buckets.push_back(std::move(sb));
  }

  // Digest over every input record (unlabeled ones included), order-free.
  std::vector<UtteranceRecord> all_sorted = records;
  std::sort(all_sorted.begin(), all_sorted.end(),
            [](const auto& a, const auto& b) { return a.utt_id < b.utt_id; });
  report.input_digest = fnv1a64_hex(serialize_records(all_sorted));

  for (const auto& metric : config.metrics) {
    // Collect per-group means over the values present for this metric.
    MeanSeries means;
    std::vector<std::pair<GroupKey, std::size_t>> counts;
    for (const auto& bucket : buckets) {
      std::vector<double> values;
      for (std::size_t i = 0; i < bucket.records.size(); ++i) {
        if (auto v = extract_metric(metric, bucket.records[i], bucket.scored[i])) {
          values.push_back(*v);
        }
      }
      counts.emplace_back(bucket.group, values.size());
      if (!values.empty()) {
        const double mean = group_mean(std::move(values), bucket.group.label, metric.name);
        means.emplace_back(bucket.group, mean);
        report.stats.push_back({bucket.group, metric.name, mean, counts.back().second});
      }
    }

    auto find_mean = [&](const GroupKey& key) -> std::optional<double> {
      for (const auto& [k, m] : means) {
        if (k == key) return m;
      }
      return std::nullopt;
    };

    const std::optional<double> baseline_mean = find_mean(report.baseline);
    std::optional<MeanSeries> di_series;
    if (baseline_mean) {
      try {
        di_series = disparate_impact(metric, means, report.baseline);
      } catch (const UndefinedDiError& e) {
        report.warnings.emplace_back(metric.name, e.what());
      }
    } else {
      report.warnings.emplace_back(metric.name,
                                   "baseline group has no data; all cells are n/a");
    }

    for (const auto& [group, count] : counts) {
      FairnessRow row;
      row.group = group;
      row.metric = metric.name;
      row.count = count;
      const std::optional<double> mean = find_mean(group);
      if (mean && baseline_mean) {
        if (group == report.baseline) {
          row.pd = 0.0;
          row.di = 1.0;
          row.level = FairnessLevel::good;
          row.flagged = false;
        } else {
          row.pd = parity_difference(*baseline_mean, *mean);
          if (di_series) {
            for (const auto& [k, di] : *di_series) {
              if (k == group) row.di = di;
            }
            auto [level, flagged] = classify(*row.pd, *row.di, config.thresholds);
            row.level = level;
            row.flagged = flagged;
          } else {
            // Undefined DI (ratio metric, baseline mean 0): PD still holds.
            row.flagged = true;
          }
        }
      }
      report.rows.push_back(std::move(row));
    }
  }

  std::sort(report.warnings.begin(), report.warnings.end());
  report.warnings.erase(std::unique(report.warnings.begin(), report.warnings.end()),
                        report.warnings.end());
  return report;
}

}  // namespace fairsynth

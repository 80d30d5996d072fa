#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairsynth/errors.hpp"
#include "fairsynth/manifest.hpp"
#include "fairsynth/textmetrics.hpp"

namespace fairsynth {

// How a metric's disparate impact is formed.
//
//   delta: difference-style metrics (delta_wer, delta_cer) where a higher
//          mean signals more bias. DI divides softmax-normalized means,
//          baseline over group, which reduces to exp(mean_baseline - mean_s).
//   ratio: preservation-style metrics (simo, autopcp) where a higher mean is
//          better. DI is the plain ratio mean_s / mean_baseline.
enum class MetricPolarity { delta, ratio };

struct MetricKind {
  std::string name;
  MetricPolarity polarity = MetricPolarity::delta;

  bool operator==(const MetricKind&) const = default;
};

// The four built-in metrics with their fixed polarities.
const std::vector<MetricKind>& default_metrics();
// Resolves a metric name: built-ins get their fixed polarity; any other name
// is treated as a custom ratio metric read from the records' extra fields.
MetricKind metric_by_name(const std::string& name);

struct GroupStats {
  GroupKey group;
  std::string metric;
  double mean = 0.0;  // raw (pre-softmax) arithmetic mean
  std::size_t count = 0;
};

enum class FairnessLevel { good, poor };

std::string to_string(FairnessLevel level);

// One (metric, group) cell of the audit. pd/di/level stay empty when the
// cell has no usable data ("n/a" in renderings).
struct FairnessRow {
  GroupKey group;
  std::string metric;
  std::optional<double> pd;
  std::optional<double> di;
  std::optional<FairnessLevel> level;
  bool flagged = false;
  std::size_t count = 0;
};

struct Thresholds {
  double di_good = 0.80;   // four-fifths rule
  double pd_flag = 0.22;
  std::string baseline_label = "healthy";

  // Enforces 0 < di_good <= 1, pd_flag >= 0, non-empty baseline label.
  void validate() const;

  bool operator==(const Thresholds&) const = default;
};

// Mean over the values. The summation order is fixed (values are summed in
// ascending order) so permuting the input cannot change the result bit for
// bit. Throws NoDataError when empty.
double group_mean(std::vector<double> values, const std::string& group = {},
                  const std::string& metric = {});

// |baseline_mean - group_mean|, on raw means (the parity difference is taken
// before any softmax normalization).
double parity_difference(double baseline_mean, double group_mean);

// Group means in a caller-defined order.
using MeanSeries = std::vector<std::pair<GroupKey, double>>;

// e^{m_s} / sum_S e^{m_s}, computed max-subtracted for stability. Outputs are
// strictly positive, sum to 1 within 1e-12 and preserve the input's argmax.
MeanSeries softmax_normalize(const MeanSeries& means);

// Disparate impact per group against the baseline.
//   delta polarity: softmax-normalize the means, then DI_s = soft(baseline) /
//   soft(s); adding or removing other groups from the series cannot change
//   the result because the partition sum cancels.
//   ratio polarity: DI_s = mean_s / mean_baseline; throws UndefinedDiError
//   when the baseline mean is 0.
// The baseline entry is exactly 1 in both branches.
MeanSeries disparate_impact(const MetricKind& metric, const MeanSeries& means,
                            const GroupKey& baseline);

// Good iff di >= di_good; flagged iff di < di_good or pd >= pd_flag.
std::pair<FairnessLevel, bool> classify(double pd, double di, const Thresholds& thresholds);

struct AuditConfig {
  Thresholds thresholds;
  NormalizationPolicy policy;
  ZeroRefFallback zero_ref_fallback = ZeroRefFallback::error;
  std::vector<MetricKind> metrics = default_metrics();
  std::vector<std::string> label_order = default_label_order();
};

// Full structured audit result. Rows and stats are ordered by
// (metric order in the config, group order in the partition).
struct AuditReport {
  std::string dimension;
  GroupKey baseline;
  std::vector<FairnessRow> rows;
  std::vector<GroupStats> stats;
  AuditConfig config;
  std::string tool_version;
  std::string input_digest;  // fnv1a64 over the sorted canonical records
  std::size_t unlabeled_count = 0;
  std::vector<std::pair<std::string, std::string>> warnings;

  bool any_flagged() const;
};

// Scores every record, partitions by `dimension` and evaluates parity
// difference, disparate impact and the fairness level for every
// (metric, group) cell. The baseline label must exist under the dimension.
// Cells without data are reported as n/a; the audit continues past them.
AuditReport audit(const std::vector<UtteranceRecord>& records, std::string_view dimension,
                  const AuditConfig& config = {});

// FNV-1a 64-bit digest, used for report provenance.
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace fairsynth

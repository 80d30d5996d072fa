#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairsynth {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed manifest content. Carries the 1-based line number of the
// offending input line (0 when no line maps to the failure).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// Semantically invalid input data: unknown condition names, missing baseline
// groups, out-of-range scores, zero denominators.
class InputError : public Error {
 public:
  using Error::Error;
};

// Error rate requested for an empty reference with a non-empty hypothesis.
class UndefinedRateError : public Error {
 public:
  using Error::Error;
};

// Cosine similarity requested for a zero-norm embedding.
class UndefinedSimilarityError : public Error {
 public:
  using Error::Error;
};

// Group mean requested for a group with no usable values. Carries the group
// label and metric name so audits can report the empty cell.
class NoDataError : public Error {
 public:
  NoDataError(const std::string& group, const std::string& metric)
      : Error("no data for metric '" + metric + "' in group '" + group + "'"),
        group_(group),
        metric_(metric) {}

  const std::string& group() const { return group_; }
  const std::string& metric() const { return metric_; }

 private:
  std::string group_;
  std::string metric_;
};

// Disparate impact is undefined (ratio-polarity metric with baseline mean 0).
class UndefinedDiError : public Error {
 public:
  using Error::Error;
};

}  // namespace fairsynth

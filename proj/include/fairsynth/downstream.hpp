#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairsynth/errors.hpp"

namespace fairsynth {

// Results of one downstream task (e.g. ASR WER per severity, detection
// accuracy) across training conditions. These tables are input data; the
// toolkit never trains the models that produce them.
struct TaskResultTable {
  std::string task;
  std::vector<std::string> conditions;  // encounter order from the JSON
  std::vector<std::string> categories;  // union of categories, encounter order
  std::map<std::string, std::map<std::string, double>> cells;  // condition -> category -> %

  bool has(const std::string& condition, const std::string& category) const;
  double at(const std::string& condition, const std::string& category) const;
};

// Reads {"task": "...", "cells": {"model1": {"low": 53.0, ...}, ...}}.
// Percent values must be >= 0.
TaskResultTable load_result_table(std::string_view json_text);
TaskResultTable load_result_table_file(const std::string& path);

// Two conventions appear in percent-change arithmetic; every rendered number
// names the one it used.
//   relative_to_old: (new - old) / old * 100
//   relative_to_new: (old - new) / new * 100
enum class ChangeConvention { relative_to_old, relative_to_new };

std::string to_string(ChangeConvention convention);

// Signed percent change between two percent values under the convention.
// Throws InputError when the denominator (old or new respectively) is not
// positive.
double relative_change(double old_value, double new_value, ChangeConvention convention);

// Per-category relative change from `base` to `other`. Categories missing in
// either condition are skipped with a warning. Swapping base and other flips
// the sign only to first order; exact antisymmetry does not hold for
// relative_to_old (the denominators differ).
std::vector<std::pair<std::string, double>> compare_conditions(
    const TaskResultTable& table, const std::string& base, const std::string& other,
    ChangeConvention convention,
    std::vector<std::pair<std::string, std::string>>* warnings = nullptr);

}  // namespace fairsynth

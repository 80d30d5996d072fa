#include "fairsynth/downstream.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fairsynth {

bool TaskResultTable::has(const std::string& condition, const std::string& category) const {
  auto it = cells.find(condition);
  return it != cells.end() && it->second.contains(category);
}

double TaskResultTable::at(const std::string& condition, const std::string& category) const {
  auto it = cells.find(condition);
  if (it == cells.end()) throw InputError("unknown condition '" + condition + "'");
  auto jt = it->second.find(category);
  if (jt == it->second.end()) {
    throw InputError("condition '" + condition + "' has no category '" + category + "'");
  }
  return jt->second;
}

TaskResultTable load_result_table(std::string_view json_text) {
  // ordered_json keeps the condition/category encounter order from the file.
  const auto parsed = nlohmann::ordered_json::parse(json_text, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw InputError("result table is not a JSON object");
  }
  TaskResultTable table;
  if (auto it = parsed.find("task"); it != parsed.end() && it->is_string()) {
    table.task = it->get<std::string>();
  }
  auto cells_it = parsed.find("cells");
  if (cells_it == parsed.end() || !cells_it->is_object()) {
    throw InputError("result table has no 'cells' object");
  }
  for (const auto& [condition, row] : cells_it->items()) {
    if (!row.is_object()) {
      throw InputError("condition '" + condition + "' must map categories to numbers");
    }
    table.conditions.push_back(condition);
    for (const auto& [category, value] : row.items()) {
      if (!value.is_number()) {
        throw InputError("cell (" + condition + ", " + category + ") is not a number");
      }
      const double percent = value.get<double>();
      if (percent < 0.0) {
        throw InputError("cell (" + condition + ", " + category + ") is negative");
      }
      table.cells[condition][category] = percent;
      if (std::find(table.categories.begin(), table.categories.end(), category) ==
          table.categories.end()) {
        table.categories.push_back(category);
      }
    }
  }
  if (table.conditions.empty()) throw InputError("result table has no conditions");
  return table;
}

TaskResultTable load_result_table_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open result table '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_result_table(buffer.str());
}

std::string to_string(ChangeConvention convention) {
  return convention == ChangeConvention::relative_to_old ? "relative_to_old"
                                                         : "relative_to_new";
}

double relative_change(double old_value, double new_value, ChangeConvention convention) {
  if (convention == ChangeConvention::relative_to_old) {
    if (old_value <= 0.0) throw InputError("relative_to_old requires old value > 0");
    return (new_value - old_value) / old_value * 100.0;
  }
  if (new_value <= 0.0) throw InputError("relative_to_new requires new value > 0");
  return (old_value - new_value) / new_value * 100.0;
}

std::vector<std::pair<std::string, double>> compare_conditions(
    const TaskResultTable& table, const std::string& base, const std::string& other,
    ChangeConvention convention,
    std::vector<std::pair<std::string, std::string>>* warnings) {
  if (!table.cells.contains(base)) throw InputError("unknown condition '" + base + "'");
  if (!table.cells.contains(other)) throw InputError("unknown condition '" + other + "'");

  std::vector<std::pair<std::string, double>> out;
  for (const auto& category : table.categories) {
    if (!table.has(base, category) || !table.has(other, category)) {
      if (warnings) {
        warnings->emplace_back(category, "category missing in one condition; skipped");
      }
      continue;
    }
    out.emplace_back(category,
                     relative_change(table.at(base, category), table.at(other, category),
                                     convention));
  }
  return out;
}

}  // namespace fairsynth

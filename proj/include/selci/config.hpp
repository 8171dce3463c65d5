#pragma once

// JSON run configuration and the delimited group-data reader used by the
// CLI. Configs are schema-checked: unknown keys are rejected and all
// violations are reported together.

#include <string>
#include <vector>

#include "selci/simulation.hpp"

namespace selci {

struct RunConfig {
  Scenario scenario;
  std::vector<ProcedureSpec> procedures;
  std::string out_csv = "results.csv";
  std::string out_svg;  // empty: no plot
  int threads = 0;      // 0: auto
};

RunConfig parse_config_json(const std::string& text);
RunConfig load_config(const std::string& path);

// One row per group: group id, outcome value, scale, selected flag (0/1).
struct GroupData {
  std::vector<std::string> group;
  std::vector<double> value;
  std::vector<double> scale;
  int selected = -1;  // index into the rows
};

// Parses a comma-delimited file with header (group, value, scale, selected).
// Exactly one row must be marked selected unless infer_argmax is set, in
// which case the selected column may be omitted or all-zero and the argmax
// row is selected. Errors carry the offending line number.
GroupData load_group_data(const std::string& path, bool infer_argmax);
GroupData parse_group_data(const std::string& text, bool infer_argmax);

}  // namespace selci

#pragma once

// Result-table serialization. Numbers are written with %.17g so every double
// round-trips bit-exactly; the column order is fixed and is part of the
// output contract:
//   scenario_id, procedure, theta, coverage, coverage_se, mean_width,
//   width_q50, width_q90, n_ok, n_err, selection_logprob

#include <string>
#include <vector>

#include "selci/simulation.hpp"

namespace selci {

extern const char* const kResultsCsvHeader;

std::string format_double(double v);  // %.17g
std::string format_results_csv(const std::vector<CellResult>& cells);
std::vector<CellResult> parse_results_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace selci

#include "selci/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace selci {

const char* const kResultsCsvHeader =
    "scenario_id,procedure,theta,coverage,coverage_se,mean_width,width_q50,"
    "width_q90,n_ok,n_err,selection_logprob";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void require_plain_label(const std::string& s, const char* field) {
  for (char c : s) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      throw std::invalid_argument(std::string("format_results_csv: ") + field +
                                  " may not contain commas, quotes, or newlines");
    }
  }
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw std::runtime_error("results csv line " + std::to_string(line_no) +
                             ": malformed number '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, std::size_t line_no) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw std::runtime_error("results csv line " + std::to_string(line_no) +
                             ": malformed integer '" + s + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

std::string format_results_csv(const std::vector<CellResult>& cells) {
  std::string out = kResultsCsvHeader;
  out.push_back('\n');
  for (const CellResult& c : cells) {
    require_plain_label(c.scenario_id, "scenario_id");
    require_plain_label(c.procedure, "procedure");
    out += c.scenario_id;
    out.push_back(',');
    out += c.procedure;
    out.push_back(',');
    out += format_double(c.theta);
    out.push_back(',');
    out += format_double(c.coverage);
    out.push_back(',');
    out += format_double(c.coverage_se);
    out.push_back(',');
    out += format_double(c.mean_width);
    out.push_back(',');
    out += format_double(c.width_q50);
    out.push_back(',');
    out += format_double(c.width_q90);
    out.push_back(',');
    out += std::to_string(c.n_ok);
    out.push_back(',');
    out += std::to_string(c.n_err);
    out.push_back(',');
    out += format_double(c.selection_logprob);
    out.push_back('\n');
  }
  return out;
}

std::vector<CellResult> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<CellResult> out;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kResultsCsvHeader) {
        throw std::runtime_error("results csv line 1: unexpected header '" + line + "'");
      }
      saw_header = true;
      continue;
    }
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 11) {
      throw std::runtime_error("results csv line " + std::to_string(line_no) +
                               ": expected 11 fields, got " + std::to_string(f.size()));
    }
    CellResult c;
    c.scenario_id = f[0];
    c.procedure = f[1];
    c.theta = parse_double(f[2], line_no);
    c.coverage = parse_double(f[3], line_no);
    c.coverage_se = parse_double(f[4], line_no);
    c.mean_width = parse_double(f[5], line_no);
    c.width_q50 = parse_double(f[6], line_no);
    c.width_q90 = parse_double(f[7], line_no);
    c.n_ok = parse_int(f[8], line_no);
    c.n_err = parse_int(f[9], line_no);
    c.selection_logprob = parse_double(f[10], line_no);
    out.push_back(std::move(c));
  }
  if (!saw_header) throw std::runtime_error("results csv: empty input");
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace selci

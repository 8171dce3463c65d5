#include "selci/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "selci/csv.hpp"

namespace selci {

namespace {

using nlohmann::json;

// Collects schema violations so a bad config reports every problem at once.
struct Schema {
  std::vector<std::string> errors;

  void fail(const std::string& msg) { errors.push_back(msg); }

  void check_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const bool known =
          std::any_of(allowed.begin(), allowed.end(),
                      [&](const char* k) { return it.key() == k; });
      if (!known) fail(where + ": unknown key '" + it.key() + "'");
    }
  }

  double number(const json& obj, const std::string& where, const char* key,
                double fallback, bool required = false) {
    if (!obj.contains(key)) {
      if (required) fail(where + ": missing required key '" + key + "'");
      return fallback;
    }
    if (!obj[key].is_number()) {
      fail(where + "." + key + ": expected a number");
      return fallback;
    }
    return obj[key].get<double>();
  }

  std::vector<double> number_array(const json& obj, const std::string& where,
                                   const char* key, bool required = false) {
    if (!obj.contains(key)) {
      if (required) fail(where + ": missing required key '" + key + "'");
      return {};
    }
    if (!obj[key].is_array()) {
      fail(where + "." + key + ": expected an array of numbers");
      return {};
    }
    std::vector<double> out;
    for (const auto& v : obj[key]) {
      if (!v.is_number()) {
        fail(where + "." + key + ": expected an array of numbers");
        return {};
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

  std::string text(const json& obj, const std::string& where, const char* key,
                   const std::string& fallback, bool required = false) {
    if (!obj.contains(key)) {
      if (required) fail(where + ": missing required key '" + key + "'");
      return fallback;
    }
    if (!obj[key].is_string()) {
      fail(where + "." + key + ": expected a string");
      return fallback;
    }
    return obj[key].get<std::string>();
  }
};

EtaSpec parse_eta_spec(Schema& s, const json& obj) {
  EtaSpec spec;
  if (!obj.is_object()) {
    s.fail("scenario.eta: expected an object");
    return spec;
  }
  const std::string kind = s.text(obj, "scenario.eta", "kind", "", true);
  if (kind == "gaussian-quantiles") {
    s.check_keys(obj, "scenario.eta", {"kind", "s0"});
    spec.kind = EtaSpec::Kind::kGaussianQuantiles;
    spec.s0 = s.number(obj, "scenario.eta", "s0", 1.0, true);
  } else if (kind == "mixture-quantiles") {
    s.check_keys(obj, "scenario.eta", {"kind", "weights", "means", "scales"});
    spec.kind = EtaSpec::Kind::kMixtureQuantiles;
    spec.weights = s.number_array(obj, "scenario.eta", "weights", true);
    spec.means = s.number_array(obj, "scenario.eta", "means", true);
    spec.scales = s.number_array(obj, "scenario.eta", "scales", true);
  } else if (kind == "explicit") {
    s.check_keys(obj, "scenario.eta", {"kind", "values"});
    spec.kind = EtaSpec::Kind::kExplicit;
    spec.values = s.number_array(obj, "scenario.eta", "values", true);
  } else if (!kind.empty()) {
    s.fail("scenario.eta.kind: unknown kind '" + kind +
           "' (expected gaussian-quantiles, mixture-quantiles, or explicit)");
  }
  return spec;
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
  }

  Schema s;
  RunConfig cfg;
  if (!root.is_object()) {
    throw std::runtime_error("config: top level must be a JSON object");
  }
  s.check_keys(root, "config", {"scenario", "procedures", "out", "plot", "threads"});

  if (!root.contains("scenario") || !root["scenario"].is_object()) {
    s.fail("config: missing required object 'scenario'");
  } else {
    const json& sc = root["scenario"];
    s.check_keys(sc, "scenario",
                 {"id", "p", "sigma", "tau", "eta", "theta", "alpha", "nRep", "seed"});
    cfg.scenario.id = s.text(sc, "scenario", "id", "scenario");
    const double p = s.number(sc, "scenario", "p", 1.0, true);
    if (p < 1 || p != std::floor(p)) {
      s.fail("scenario.p: expected a positive integer");
    } else {
      cfg.scenario.p = static_cast<int>(p);
    }
    cfg.scenario.sigma = s.number(sc, "scenario", "sigma", 1.0);
    if (!(cfg.scenario.sigma > 0.0)) s.fail("scenario.sigma: must be > 0");

    if (sc.contains("tau") && sc["tau"].is_array()) {
      cfg.scenario.tau = s.number_array(sc, "scenario", "tau");
      if (static_cast<int>(cfg.scenario.tau.size()) != cfg.scenario.p) {
        s.fail("scenario.tau: array length must equal p");
      }
    } else {
      const double t = s.number(sc, "scenario", "tau", 1.0);
      cfg.scenario.tau.assign(static_cast<std::size_t>(std::max(cfg.scenario.p, 0)), t);
    }
    for (double t : cfg.scenario.tau) {
      if (!(t > 0.0)) {
        s.fail("scenario.tau: all scales must be > 0");
        break;
      }
    }

    if (!sc.contains("eta")) {
      s.fail("scenario: missing required key 'eta'");
    } else {
      cfg.scenario.eta_spec = parse_eta_spec(s, sc["eta"]);
    }

    cfg.scenario.theta_values = s.number_array(sc, "scenario", "theta", true);
    if (cfg.scenario.theta_values.empty()) s.fail("scenario.theta: must be non-empty");

    cfg.scenario.alpha = s.number(sc, "scenario", "alpha", 0.05);
    if (!(cfg.scenario.alpha > 0.0 && cfg.scenario.alpha < 1.0)) {
      s.fail("scenario.alpha: must lie in (0,1)");
    }
    const double n_rep = s.number(sc, "scenario", "nRep", 1000.0);
    if (n_rep < 1 || n_rep != std::floor(n_rep)) {
      s.fail("scenario.nRep: expected a positive integer");
    } else {
      cfg.scenario.n_rep = static_cast<int>(n_rep);
    }
    const double seed = s.number(sc, "scenario", "seed", 1.0);
    if (seed < 0 || seed != std::floor(seed)) {
      s.fail("scenario.seed: expected a nonnegative integer");
    } else {
      cfg.scenario.seed = static_cast<std::uint64_t>(seed);
    }
  }

  if (!root.contains("procedures") || !root["procedures"].is_array() ||
      root["procedures"].empty()) {
    s.fail("config: 'procedures' must be a non-empty array of names");
  } else {
    for (const auto& v : root["procedures"]) {
      if (!v.is_string()) {
        s.fail("procedures: entries must be strings");
        continue;
      }
      try {
        cfg.procedures.push_back(procedure_by_name(v.get<std::string>()));
      } catch (const std::exception& e) {
        s.fail(std::string("procedures: ") + e.what());
      }
    }
  }

  cfg.out_csv = s.text(root, "config", "out", "results.csv");
  cfg.out_svg = s.text(root, "config", "plot", "");
  const double threads = s.number(root, "config", "threads", 0.0);
  if (threads != std::floor(threads)) {
    s.fail("config.threads: expected an integer");
  } else {
    cfg.threads = static_cast<int>(threads);
  }

  if (!s.errors.empty()) {
    std::ostringstream msg;
    msg << "config: " << s.errors.size() << " schema violation(s):";
    for (const std::string& e : s.errors) msg << "\n  - " << e;
    throw std::runtime_error(msg.str());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config_json(read_text_file(path));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
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
  for (std::string& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = (b == std::string::npos) ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace

GroupData parse_group_data(const std::string& text, bool infer_argmax) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  GroupData out;
  bool saw_header = false;
  bool header_has_selected = false;
  std::vector<int> selected_flags;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (!saw_header) {
      if (f.size() < 3 || f[0] != "group" || f[1] != "value" || f[2] != "scale" ||
          (f.size() == 4 && f[3] != "selected") || f.size() > 4) {
        throw std::runtime_error(
            "data line " + std::to_string(line_no) +
            ": header must be 'group,value,scale[,selected]', got '" + line + "'");
      }
      header_has_selected = (f.size() == 4);
      saw_header = true;
      continue;
    }
    const std::size_t want = header_has_selected ? 4 : 3;
    if (f.size() != want) {
      throw std::runtime_error("data line " + std::to_string(line_no) + ": expected " +
                               std::to_string(want) + " fields, got " +
                               std::to_string(f.size()));
    }
    char* end = nullptr;
    const double value = std::strtod(f[1].c_str(), &end);
    if (end == f[1].c_str() || *end != '\0' || !std::isfinite(value)) {
      throw std::runtime_error("data line " + std::to_string(line_no) +
                               ": malformed value '" + f[1] + "'");
    }
    const double scale = std::strtod(f[2].c_str(), &end);
    if (end == f[2].c_str() || *end != '\0' || !(scale > 0.0) || !std::isfinite(scale)) {
      throw std::runtime_error("data line " + std::to_string(line_no) +
                               ": scale must be a positive number, got '" + f[2] + "'");
    }
    int flag = 0;
    if (header_has_selected) {
      if (f[3] == "0") {
        flag = 0;
      } else if (f[3] == "1") {
        flag = 1;
      } else {
        throw std::runtime_error("data line " + std::to_string(line_no) +
                                 ": selected must be 0 or 1, got '" + f[3] + "'");
      }
    }
    out.group.push_back(f[0]);
    out.value.push_back(value);
    out.scale.push_back(scale);
    selected_flags.push_back(flag);
  }

  if (!saw_header) throw std::runtime_error("data: empty input");
  if (out.value.size() < 2) {
    throw std::runtime_error("data: need at least two groups (one selected, one not)");
  }

  int n_marked = 0, marked = -1;
  for (std::size_t i = 0; i < selected_flags.size(); ++i) {
    if (selected_flags[i]) {
      ++n_marked;
      marked = static_cast<int>(i);
    }
  }
  const int argmax = static_cast<int>(
      std::max_element(out.value.begin(), out.value.end()) - out.value.begin());

  if (n_marked > 1) {
    throw std::runtime_error("data: more than one row marked selected");
  }
  if (n_marked == 1) {
    out.selected = marked;
  } else if (infer_argmax) {
    out.selected = argmax;
  } else {
    throw std::runtime_error(
        "data: no row marked selected (pass the argmax-inference flag to select "
        "the largest value)");
  }

  const double y = out.value[static_cast<std::size_t>(out.selected)];
  for (std::size_t i = 0; i < out.value.size(); ++i) {
    if (static_cast<int>(i) == out.selected) continue;
    if (!(out.value[i] < y)) {
      throw std::runtime_error(
          "data: selection event not satisfied: group '" + out.group[i] + "' has value " +
          format_double(out.value[i]) + " >= selected value " + format_double(y));
    }
  }
  return out;
}

GroupData load_group_data(const std::string& path, bool infer_argmax) {
  return parse_group_data(read_text_file(path), infer_argmax);
}

}  // namespace selci

#include "fwgame/harness.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fwgame {

namespace {

constexpr const char* kRoundsHeader =
    "preset,seed,T,t,alpha,f_or_g_value,gap,regret_x_partial,regret_y_partial";
constexpr const char* kSummaryHeader = "preset,seed,T,final_error,gap,regret_sum_over_AT";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + ": '" + s + "'");
  }
}

long long to_integer(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + ": '" + s + "'");
  }
}

std::uint64_t to_seed(const std::string& s) {
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size() || s.front() == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse seed: '" + s + "'");
  }
}

void check_header(std::istream& is, const char* expected) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != expected) {
    throw ConfigError(std::string("unexpected CSV header, wanted ") + expected);
  }
}

}  // namespace

void write_rounds_csv(std::ostream& os, const std::vector<RoundRow>& rows) {
  os << kRoundsHeader << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.preset << ',' << r.seed << ',' << r.T << ',' << r.t << ',' << r.alpha << ','
       << r.f_or_g_value << ',' << r.gap << ',' << r.regret_x_partial << ','
       << r.regret_y_partial << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << kSummaryHeader << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.preset << ',' << r.seed << ',' << r.T << ',' << r.final_error << ',' << r.gap << ','
       << r.regret_sum_over_AT << '\n';
  }
}

std::vector<RoundRow> read_rounds_csv(std::istream& is) {
  check_header(is, kRoundsHeader);
  std::vector<RoundRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto c = split(trim(line), ',');
    if (c.size() != 9) throw ConfigError("rounds CSV: expected 9 columns");
    RoundRow r;
    r.preset = c[0];
    r.seed = to_seed(c[1]);
    r.T = static_cast<int>(to_integer(c[2], "T"));
    r.t = static_cast<int>(to_integer(c[3], "t"));
    r.alpha = to_double(c[4], "alpha");
    r.f_or_g_value = to_double(c[5], "value");
    r.gap = to_double(c[6], "gap");
    r.regret_x_partial = to_double(c[7], "regret_x");
    r.regret_y_partial = to_double(c[8], "regret_y");
    rows.push_back(r);
  }
  return rows;
}

std::vector<SummaryRow> read_summary_csv(std::istream& is) {
  check_header(is, kSummaryHeader);
  std::vector<SummaryRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto c = split(trim(line), ',');
    if (c.size() != 6) throw ConfigError("summary CSV: expected 6 columns");
    SummaryRow r;
    r.preset = c[0];
    r.seed = to_seed(c[1]);
    r.T = static_cast<int>(to_integer(c[2], "T"));
    r.final_error = to_double(c[3], "final_error");
    r.gap = to_double(c[4], "gap");
    r.regret_sum_over_AT = to_double(c[5], "regret_sum_over_AT");
    rows.push_back(r);
  }
  return rows;
}

void write_preset_csv(const std::string& dir, const PresetResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
  const fs::path base(dir);
  std::ofstream rounds(base / (result.preset + "_rounds.csv"));
  std::ofstream summary(base / (result.preset + "_summary.csv"));
  if (!rounds || !summary) throw Error("cannot open CSV files in " + dir);
  write_rounds_csv(rounds, result.rounds);
  write_summary_csv(summary, result.summary);
  if (!rounds || !summary) throw Error("failed writing CSV files in " + dir);
}

std::vector<int> parse_T_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& cell : split(text, ',')) {
    const std::string s = trim(cell);
    if (s.empty()) continue;
    const long long v = to_integer(s, "T");
    if (v < 1 || v > 100000000) throw ConfigError("T values must be positive: " + s);
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ConfigError("empty T list");
  return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "preset") {
      cfg.preset = value;
    } else if (key == "T") {
      cfg.T_list = parse_T_list(value);
    } else if (key == "seed") {
      cfg.seed = to_seed(value);
    } else if (key == "eta-mult" || key == "eta_mult") {
      cfg.eta_multiplier = to_double(value, "eta-mult");
    } else if (key == "out") {
      cfg.output_path = value;
    } else if (key == "dims") {
      cfg.dims = static_cast<int>(to_integer(value, "dims"));
    } else if (key.rfind("tol.", 0) == 0) {
      cfg.tolerances[key.substr(4)] = to_double(value, key);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void ExperimentConfig::validate() const {
  if (!is_preset(preset)) {
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + preset + "'; available: " + names);
  }
  for (size_t i = 1; i < T_list.size(); ++i) {
    if (T_list[i] <= T_list[i - 1]) throw ConfigError("T list must be strictly increasing");
  }
  if (!(eta_multiplier > 0)) throw ConfigError("eta multiplier must be positive");
  if (dims && (*dims < 1 || *dims > 64)) throw ConfigError("dims must lie in [1, 64]");
}

}  // namespace fwgame

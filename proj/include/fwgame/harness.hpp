#pragma once

#include "fwgame/core.hpp"
#include "fwgame/fw.hpp"
#include "fwgame/game_engine.hpp"
#include "fwgame/payoff.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fwgame {

enum class RateModel { PowerLaw, Exponential };

struct RateFit {
  RateModel model = RateModel::PowerLaw;
  double slope_or_decay = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
};

constexpr double kFitFloor = 1e-12;

// Least squares of log(error) against log(T) or T, ignoring errors at or below
// the 1e-12 floor.
RateFit fit_rate(const std::vector<std::pair<double, double>>& series, RateModel model);

// Uniform-grid estimate of sup_y g(x_bar, y) - inf_x g(x, y_bar) for sides of
// dimension <= 2. Bounded sets are also sampled along their boundary.
double brute_force_gap(const GamePayoff& payoff, const Point& x_bar, const Point& y_bar,
                       int resolution);

struct ExperimentConfig {
  std::string preset;
  std::vector<int> T_list;  // empty means the preset default
  std::uint64_t seed = 0;
  double eta_multiplier = 1.0;
  std::string output_path;  // directory; empty disables CSV output
  std::optional<int> dims;
  std::map<std::string, double> tolerances;

  void validate() const;
};

// Flat "key = value" text with '#' comments. Keys: preset, T, seed, eta-mult,
// out, dims, tol.<check>.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
// Comma-separated list such as "64,128,256".
std::vector<int> parse_T_list(const std::string& text);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "<", "=="
  bool pass = false;
};

struct RoundRow {
  std::string preset;
  std::uint64_t seed = 0;
  int T = 0;
  int t = 0;
  double alpha = 0.0;
  double f_or_g_value = 0.0;
  double gap = 0.0;
  double regret_x_partial = 0.0;
  double regret_y_partial = 0.0;
};

struct SummaryRow {
  std::string preset;
  std::uint64_t seed = 0;
  int T = 0;
  double final_error = 0.0;
  double gap = 0.0;
  double regret_sum_over_AT = 0.0;
};

struct CertificateRun {
  std::string label;
  SandwichReport report;
  std::optional<double> brute_gap;
};

struct PresetResult {
  std::string preset;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<RateFit> fits;
  std::vector<RoundRow> rounds;
  std::vector<SummaryRow> summary;
  std::vector<CertificateRun> certificates;
  std::vector<std::string> notes;

  bool passed() const;
  std::string report() const;
};

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);
PresetResult run_preset(const ExperimentConfig& config);

// A seeded two-dimensional game attached to each preset, used for the
// regret certificate and brute-force cross-checks.
struct CertificateGame {
  std::string label;
  GamePayoff payoff;
  GameConfig config;
};
CertificateGame certificate_game(const std::string& preset, std::uint64_t seed);
CertificateRun run_certificate(const CertificateGame& game, int brute_resolution);

// Per-round rows of a finished game. `values` fills the value column;
// defaults to g(x_t, y_t).
std::vector<RoundRow> round_rows(const std::string& preset, std::uint64_t seed,
                                 const GameTrace& trace, const GamePayoff& payoff,
                                 const std::vector<double>* values = nullptr);

void write_rounds_csv(std::ostream& os, const std::vector<RoundRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
std::vector<RoundRow> read_rounds_csv(std::istream& is);
std::vector<SummaryRow> read_summary_csv(std::istream& is);
// Writes <dir>/<preset>_rounds.csv and <dir>/<preset>_summary.csv.
void write_preset_csv(const std::string& dir, const PresetResult& result);

}  // namespace fwgame

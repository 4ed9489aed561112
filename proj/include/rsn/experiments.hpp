#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rsn/hdiagram.hpp"

namespace rsn {

struct ExperimentConfig {
  std::string id;
  int n = 200;
  std::vector<int> n_ladder;   // scaling-collapse diagnostic
  double u = 0.0;
  std::vector<double> u_grid;  // semicircle
  int radius = 10;             // window half-width in swap positions
  double t = 1.0;              // scaled time horizon
  std::vector<double> t_grid;
  std::vector<int> lags;       // translation-mixing
  double t_cap = 6.0;          // censoring time for F samples (scaled)
  bool exact = false;          // semicircle: rational arithmetic
  std::int64_t replicas = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;             // CSV path
  std::string raw_out;         // optional JSON-lines event dump

  // Canonical key=value text; parse_config(echo()) round-trips.
  std::string echo() const;
};

// Flat "key = value" lines, '#' starts a comment, lists are comma separated.
// Unknown keys and malformed values raise DomainError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void check(const ExperimentConfig& config);

struct Estimate {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t replicas = 0;
  int n = 0;
  double u = 0.0;
  double t = 0.0;
};

struct StatsReport {
  ExperimentConfig config;
  std::vector<Estimate> rows;
  std::vector<std::string> failures;  // violated deterministic checks
  double wall_seconds = 0.0;

  const Estimate& row(const std::string& name) const;  // PreconditionError when absent
  bool has_row(const std::string& name) const;
};

// Swap position index a = round((1+u)n/2), clamped to 1..n-1.
int window_index(int order, double u);
// Bottom-row cell of T(0,n) below swap index a.
Cell bottom_cell(int order, int index);

StatsReport estimate_swap_rate(const ExperimentConfig& config);
StatsReport semicircle_curve(const ExperimentConfig& config);
StatsReport swap_height_identity(const ExperimentConfig& config);
StatsReport scaling_collapse(const ExperimentConfig& config);
StatsReport translation_and_mixing(const ExperimentConfig& config);
StatsReport gap_tail(const ExperimentConfig& config);
StatsReport rate_audits(const ExperimentConfig& config);

const std::vector<std::string>& experiment_ids();
// Dispatch on config.id; unknown ids raise DomainError.
StatsReport run_experiment(const ExperimentConfig& config);

// Columns: experiment,name,estimate,std_error,replicas,n,u,t,seed.
void write_csv(std::ostream& os, const StatsReport& report);

}  // namespace rsn

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "frustra/exact_solver.hpp"
#include "frustra/mps_engine.hpp"
#include "frustra/projectors.hpp"

namespace frustra {

enum class Mode { Count, PhaseDiagram, SolveExact, Product, Tebd, OracleCheck, AppendixVerify };

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  Mode mode = Mode::Count;
  ChainSpec chain;
  int count_length = 60;            // D_0..D_n length for count mode
  int d_max = 6;                    // phase-diagram grid bound
  std::vector<int> chi_list{8};     // tebd
  std::vector<std::uint64_t> seeds; // multi-seed modes; empty = {chain.seed}
  TauSchedule schedule;
  StopRule stop;
  double rank_tol = 1e-10;
  bool second_order = false;
  std::filesystem::path out_dir = ".";
  enum class Format { Csv, Json } format = Format::Csv;

  void validate() const;  // throws ConfigError
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 verification failure
  std::vector<std::filesystem::path> artifacts;
  std::string summary;
};

// Dispatches on mode, writes artifact files under out_dir, returns a summary.
// Identical configs produce byte-identical artifacts; multi-cell modes run
// cells in parallel but buffer and write results in config order.
RunResult run(const ExperimentConfig& config);

// Phase-diagram rows (d, r, regime, 4r vs d^2, first frustrated length) for
// all 2 <= d <= d_max, 1 <= r <= d^2.
std::string phase_diagram_csv(int d_max);

// Per-step propagation table: n, s_n, D_n, rank_C, sigma_gap.
std::string solution_table_csv(const ChainSpec& spec, const SolutionStack& stack);

// Convergence trace rows: sweep, tau, energy, trunc_err, S_min, S_max.
std::string trace_csv(const ConvergenceTrace& trace);

// Default output directory: $FRUSTRA_OUT if set, else the current directory.
std::filesystem::path default_out_dir();

}  // namespace frustra

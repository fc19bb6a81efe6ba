#pragma once

#include "tomoqubo/encoding.hpp"
#include "tomoqubo/qubo.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tomoqubo {

struct SolveConfig {
  int restarts = 20;
  int sweeps_per_restart = 1000;
  /// Unset means auto_temperature().
  std::optional<double> initial_temperature;
  std::optional<double> final_temperature;
  std::uint64_t seed = 0;
  /// Worker threads for restarts; 0 uses the hardware concurrency.
  int threads = 0;
  /// Wall-clock cap; when hit, the best assignment found so far is returned.
  std::optional<std::chrono::milliseconds> time_limit;
  /// When nonzero, every this many accepted flips the running energy is
  /// compared with a full re-evaluation and std::logic_error is thrown on
  /// disagreement beyond 1e-6 relative.
  std::uint64_t audit_interval = 0;
  /// Called once per finished restart (from the worker thread).
  std::function<void(int restart, double best_energy)> on_restart;

  void validate() const;
};

struct SolveResult {
  Bits best_bits;
  double best_energy = 0.0;
  std::vector<double> restart_energies;
  std::chrono::duration<double, std::milli> elapsed{0};
  bool timed_out = false;
};

struct TemperatureRange {
  double initial;
  double final;
};

/// Largest per-variable sum of |incident coefficients| as the starting
/// temperature; 1e-3 times the smallest nonzero |coefficient| as the final
/// one. Throws std::invalid_argument for a model without nonzero terms.
TemperatureRange auto_temperature(const QuboModel& model);

inline constexpr Eigen::Index kBruteForceMaxVars = 24;

/// Exhaustive minimum over all 2^n assignments (Gray-code order). Ties within
/// 1e-9 relative go to the lexicographically smallest bitstring. Throws
/// SizeError above kBruteForceMaxVars variables.
SolveResult brute_force(const QuboModel& model);

/// Multi-restart Metropolis annealing with single-bit flips. Each restart
/// starts from all zeros and uses its own generator seeded from (seed,
/// restart index), so results do not depend on thread count or on how many
/// restarts follow. Each sweep visits every variable once in a freshly
/// shuffled order while the temperature decays geometrically from initial to
/// final. Flip costs come from per-variable local fields updated along the
/// adjacency list of each accepted flip.
SolveResult anneal(const QuboModel& model, const SolveConfig& config);

/// Seed of restart `r` derived from the base seed.
std::uint64_t restart_seed(std::uint64_t seed, int restart);

/// {"energy", "bits", "restart_energies"} plus "elapsed_ms" when
/// `include_timing` is set.
std::string solve_result_to_json(const SolveResult& result, bool include_timing);
SolveResult solve_result_from_json(std::string_view text);

}  // namespace tomoqubo

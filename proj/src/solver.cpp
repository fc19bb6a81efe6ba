#include "tomoqubo/solver.hpp"

#include "tomoqubo/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace tomoqubo {

namespace {

using Clock = std::chrono::steady_clock;
using Symmetric = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Full coupling matrix J = U + U^T; column v lists the neighbors of v.
Symmetric couplings(const QuboModel& model) {
  const Symmetric upper = model.quadratic();
  return Symmetric(upper + Symmetric(upper.transpose()));
}

bool energies_tie(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct RestartOutcome {
  Bits bits;
  double energy = std::numeric_limits<double>::infinity();
  bool ran = false;
};

class Annealer {
 public:
  Annealer(const QuboModel& model, const SolveConfig& config, TemperatureRange temps,
           Clock::time_point deadline, bool has_deadline)
      : model_(model),
        config_(config),
        temps_(temps),
        deadline_(deadline),
        has_deadline_(has_deadline),
        couplings_(couplings(model)) {}

  RestartOutcome run(int restart, std::atomic<bool>& timed_out) const {
    const Eigen::Index n = model_.num_vars();
    std::mt19937_64 rng(restart_seed(config_.seed, restart));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    Bits state = Bits::Zero(n);
    Eigen::VectorXd field = model_.linear();
    double current = model_.offset();

    RestartOutcome out;
    out.ran = true;
    out.bits = state;
    out.energy = current;

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    const int sweeps = config_.sweeps_per_restart;
    const double decay =
        sweeps > 1 ? std::pow(temps_.final / temps_.initial, 1.0 / (sweeps - 1)) : 1.0;
    double temperature = temps_.initial;
    std::uint64_t accepted = 0;

    for (int sweep = 0; sweep < sweeps; ++sweep) {
      std::shuffle(order.begin(), order.end(), rng);
      for (const int v : order) {
        const double delta = state(v) ? -field(v) : field(v);
        if (delta > 0.0 && uniform(rng) >= std::exp(-delta / temperature)) continue;

        state(v) ^= 1u;
        current += delta;
        const double sign = state(v) ? 1.0 : -1.0;
        for (Symmetric::InnerIterator it(couplings_, v); it; ++it)
          field(it.row()) += sign * it.value();

        if (current < out.energy) {
          out.energy = current;
          out.bits = state;
        }
        if (config_.audit_interval != 0 && ++accepted % config_.audit_interval == 0) audit(state, current);
      }
      temperature *= decay;
      if (has_deadline_ && Clock::now() >= deadline_) {
        timed_out = true;
        break;
      }
    }
    out.energy = energy(model_, out.bits);
    return out;
  }

 private:
  void audit(const Bits& state, double running) const {
    const double exact = energy(model_, state);
    if (std::abs(exact - running) > 1e-6 * std::max(1.0, std::abs(exact)))
      throw std::logic_error("incremental energy drifted: running " + std::to_string(running) +
                             " vs exact " + std::to_string(exact));
  }

  const QuboModel& model_;
  const SolveConfig& config_;
  TemperatureRange temps_;
  Clock::time_point deadline_;
  bool has_deadline_;
  Symmetric couplings_;
};

}  // namespace

void SolveConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (sweeps_per_restart < 1) throw std::invalid_argument("sweeps_per_restart must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  for (const auto& t : {initial_temperature, final_temperature})
    if (t && !(*t > 0.0 && std::isfinite(*t)))
      throw std::invalid_argument("temperatures must be positive and finite");
  if (initial_temperature && final_temperature && !(*final_temperature < *initial_temperature))
    throw std::invalid_argument("final temperature must be below the initial temperature");
  if (time_limit && time_limit->count() <= 0) throw std::invalid_argument("time limit must be positive");
}

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(restart)));
}

TemperatureRange auto_temperature(const QuboModel& model) {
  if (model.empty()) throw std::invalid_argument("auto temperature needs a non-empty model");
  Eigen::VectorXd incident = model.linear().cwiseAbs();
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index v = 0; v < model.num_vars(); ++v)
    if (model.linear()(v) != 0.0) smallest = std::min(smallest, std::abs(model.linear()(v)));
  const auto& q = model.quadratic();
  for (int r = 0; r < q.outerSize(); ++r) {
    for (QuboModel::Upper::InnerIterator it(q, r); it; ++it) {
      const double mag = std::abs(it.value());
      incident(it.row()) += mag;
      incident(it.col()) += mag;
      smallest = std::min(smallest, mag);
    }
  }
  if (!std::isfinite(smallest))
    throw std::invalid_argument("auto temperature needs at least one nonzero coefficient");
  return {incident.maxCoeff(), 1e-3 * smallest};
}

SolveResult brute_force(const QuboModel& model) {
  const Eigen::Index n = model.num_vars();
  if (n > kBruteForceMaxVars)
    throw SizeError("brute force refuses " + std::to_string(n) + " variables (limit " +
                    std::to_string(kBruteForceMaxVars) + ")");
  const auto start = Clock::now();
  const Symmetric j = couplings(model);

  // Lexicographic order over (b_0, b_1, ...) is numeric order of the mask
  // with bit 0 as the most significant bit.
  auto lex_key = [n](std::uint32_t mask) {
    std::uint32_t key = 0;
    for (Eigen::Index v = 0; v < n; ++v)
      if (mask >> v & 1u) key |= 1u << (n - 1 - v);
    return key;
  };

  Eigen::VectorXd field = model.linear();
  double current = model.offset();
  std::uint32_t mask = 0;
  double best = current;
  std::uint32_t best_mask = 0;

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const int v = std::countr_zero(g);
    const bool on = (mask >> v & 1u) != 0;
    current += on ? -field(v) : field(v);
    mask ^= 1u << v;
    const double sign = on ? -1.0 : 1.0;
    for (Symmetric::InnerIterator it(j, v); it; ++it) field(it.row()) += sign * it.value();

    if (energies_tie(current, best)) {
      if (lex_key(mask) < lex_key(best_mask)) {
        best_mask = mask;
        best = std::min(best, current);
      }
    } else if (current < best) {
      best = current;
      best_mask = mask;
    }
  }

  SolveResult result;
  result.best_bits = Bits::Zero(n);
  for (Eigen::Index v = 0; v < n; ++v) result.best_bits(v) = (best_mask >> v) & 1u;
  result.best_energy = energy(model, result.best_bits);
  result.restart_energies = {result.best_energy};
  result.elapsed = Clock::now() - start;
  return result;
}

SolveResult anneal(const QuboModel& model, const SolveConfig& config) {
  config.validate();
  const auto start = Clock::now();
  SolveResult result;

  const bool trivial =
      model.empty() || (model.linear().isZero(0.0) && model.quadratic().nonZeros() == 0);
  if (trivial) {
    result.best_bits = Bits::Zero(model.num_vars());
    result.best_energy = model.offset();
    result.restart_energies.assign(static_cast<std::size_t>(config.restarts), model.offset());
    result.elapsed = Clock::now() - start;
    return result;
  }

  TemperatureRange temps{0.0, 0.0};
  if (!config.initial_temperature || !config.final_temperature) temps = auto_temperature(model);
  if (config.initial_temperature) temps.initial = *config.initial_temperature;
  if (config.final_temperature) temps.final = *config.final_temperature;
  if (!(temps.final < temps.initial)) temps.final = 1e-3 * temps.initial;

  const bool has_deadline = config.time_limit.has_value();
  const auto deadline = has_deadline ? start + *config.time_limit : Clock::time_point::max();
  const Annealer annealer(model, config, temps, deadline, has_deadline);

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  std::atomic<int> next{0};
  std::atomic<bool> timed_out{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const int r = next.fetch_add(1);
      if (r >= config.restarts) return;
      // Restart 0 always runs so a result exists even under a tiny budget.
      if (r > 0 && timed_out.load()) return;
      try {
        outcomes[static_cast<std::size_t>(r)] = annealer.run(r, timed_out);
        if (config.on_restart) config.on_restart(r, outcomes[static_cast<std::size_t>(r)].energy);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        timed_out = true;
      }
    }
  };

  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int threads = std::min(config.threads > 0 ? config.threads : hw, config.restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  int best = -1;
  for (int r = 0; r < config.restarts; ++r) {
    const RestartOutcome& o = outcomes[static_cast<std::size_t>(r)];
    if (!o.ran) continue;
    result.restart_energies.push_back(o.energy);
    if (best < 0 || o.energy < outcomes[static_cast<std::size_t>(best)].energy) best = r;
  }
  result.best_bits = outcomes[static_cast<std::size_t>(best)].bits;
  result.best_energy = outcomes[static_cast<std::size_t>(best)].energy;
  result.timed_out = timed_out.load();
  result.elapsed = Clock::now() - start;
  return result;
}

std::string solve_result_to_json(const SolveResult& result, bool include_timing) {
  nlohmann::ordered_json doc;
  doc["energy"] = result.best_energy;
  std::string bits = format_bitstring(result.best_bits);
  bits.pop_back();
  doc["bits"] = std::move(bits);
  doc["restart_energies"] = result.restart_energies;
  if (include_timing) doc["elapsed_ms"] = result.elapsed.count();
  return doc.dump();
}

SolveResult solve_result_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    SolveResult r;
    r.best_energy = doc.at("energy").get<double>();
    r.best_bits = parse_bitstring(doc.at("bits").get<std::string>());
    r.restart_energies = doc.at("restart_energies").get<std::vector<double>>();
    if (doc.contains("elapsed_ms"))
      r.elapsed = std::chrono::duration<double, std::milli>(doc["elapsed_ms"].get<double>());
    return r;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("solve result JSON: ") + e.what(), e.byte, false);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("solve result JSON: ") + e.what());
  }
}

}  // namespace tomoqubo

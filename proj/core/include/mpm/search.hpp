#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mpm/filtration.hpp"

namespace mpm {

struct Objective {
  enum class Kind { TheoremARatio, TheoremBRatio, PNormRatio };
  Kind kind = Kind::TheoremARatio;
  double p = 1.0;  // PNormRatio only

  static Objective theorem_a() { return {Kind::TheoremARatio, 1.0}; }
  static Objective theorem_b() { return {Kind::TheoremBRatio, 1.0}; }
  static Objective pnorm(double p) { return {Kind::PNormRatio, p}; }

  /// "theorem_a_ratio", "theorem_b_ratio", "pnorm_ratio(p=1.5)"
  std::string name() const;
  /// Whether candidates carry a second terminal variable (the weight a).
  bool uses_weight() const { return kind != Kind::PNormRatio; }
};

/// Throws ConfigError when the filtration does not meet the objective's
/// hypotheses (one parameter for the one-parameter bound, F4 for the others).
void require_compatible(const MultiFiltration& filtration, const Objective& objective);

/// Objective value of the martingales closed by the given terminal
/// variables. one-parameter bound: worst per-atom ratio; k-parameter bound: lhs/rhs; p-norm:
/// E[(Sf)^p]/E[(f*)^p] after boundary reduction. Degenerate denominators
/// score 0. `weight_terminal` is ignored for the p-norm objective.
double evaluate_objective(const std::shared_ptr<const MultiFiltration>& filtration, const Objective& objective,
                          std::span<const double> terminal, std::span<const double> weight_terminal);

struct SearchOptions {
  std::size_t budget = 1000;      // hill-climbing iterations after the initial population
  std::size_t population = 8;     // random starting points
  double scale = 1.0;             // spread of random terminal values
  double initial_step = 1.0;
  double step_decay = 0.5;
  double min_step = 1e-3;
};

struct SearchResult {
  Objective objective;
  double best_value = 0.0;
  std::vector<double> best_terminal;         // X_f
  std::vector<double> best_weight_terminal;  // X_a, empty for p-norm
  /// trace[0] is the best of the initial population, then one entry per
  /// iteration; nondecreasing.
  std::vector<double> trace;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
};

/// Random restarts plus coordinate-wise hill climbing over terminal
/// variables. Every candidate closes to a valid martingale pair, so the
/// search ranges over exactly the martingale pairs on the filtration.
/// Deterministic in (filtration, objective, options, seed); the first n
/// iterations do not depend on the budget.
SearchResult extremal_search(const std::shared_ptr<const MultiFiltration>& filtration, const Objective& objective,
                             const SearchOptions& options, std::uint64_t seed);

struct ConstantProfile {
  Objective objective;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<double> per_trial;
  double max = 0.0;
  double median = 0.0;
  /// Full result of the first trial attaining `max`.
  SearchResult best;
};

/// `trials` independent searches with seeds derived from `seed`, run on up
/// to `threads` workers and merged by trial index.
ConstantProfile constant_profile(const std::shared_ptr<const MultiFiltration>& filtration,
                                 const Objective& objective, std::size_t trials, std::uint64_t seed,
                                 const SearchOptions& options = {}, std::size_t threads = 1);

/// Applies `work(i)` for i in [0, n) on up to `threads` workers.
template <class Work>
void parallel_for(std::size_t n, std::size_t threads, Work&& work);

}  // namespace mpm

#include "mpm/detail/parallel.hpp"

#include "mpm/search.hpp"

#include <algorithm>
#include <sstream>

#include "mpm/errors.hpp"
#include "mpm/inequalities.hpp"
#include "mpm/martingale.hpp"
#include "mpm/rng.hpp"
#include "mpm/structure.hpp"

namespace mpm {

std::string Objective::name() const {
  switch (kind) {
    case Kind::TheoremARatio:
      return "theorem_a_ratio";
    case Kind::TheoremBRatio:
      return "theorem_b_ratio";
    case Kind::PNormRatio: {
      std::ostringstream s;
      s << "pnorm_ratio(p=" << p << ")";
      return s.str();
    }
  }
  return "unknown";
}

void require_compatible(const MultiFiltration& filtration, const Objective& objective) {
  if (objective.kind == Objective::Kind::TheoremARatio && filtration.dim() != 1) {
    throw ConfigError("theorem_a_ratio needs a one-parameter filtration, got k=" + std::to_string(filtration.dim()));
  }
  if (objective.kind == Objective::Kind::PNormRatio && !(objective.p > 0.0)) {
    throw ConfigError("pnorm_ratio needs p > 0");
  }
  if (objective.kind != Objective::Kind::TheoremARatio && !filtration.f4_certified()) {
    const auto report = check_f4(filtration, 1e-12);
    if (!report.pass) throw ConfigError(objective.name() + " needs a filtration satisfying F4");
  }
}

double evaluate_objective(const std::shared_ptr<const MultiFiltration>& filtration, const Objective& objective,
                          std::span<const double> terminal, std::span<const double> weight_terminal) {
  const auto f = martingale_from_terminal(terminal, filtration);
  switch (objective.kind) {
    case Objective::Kind::TheoremARatio: {
      const auto a = martingale_from_terminal(weight_terminal, filtration);
      return theorem_a_check(f, a).max_ratio;
    }
    case Objective::Kind::TheoremBRatio: {
      const auto a = martingale_from_terminal(weight_terminal, filtration);
      return theorem_b_check(f, a, std::nullopt, 1.0).max_ratio;
    }
    case Objective::Kind::PNormRatio:
      return pnorm_comparison(boundary_reduce(f), objective.p).ratio;
  }
  return 0.0;
}

SearchResult extremal_search(const std::shared_ptr<const MultiFiltration>& filtration, const Objective& objective,
                             const SearchOptions& options, std::uint64_t seed) {
  if (!filtration) throw ConfigError("extremal_search: null filtration");
  require_compatible(*filtration, objective);
  if (options.population == 0) throw ConfigError("extremal_search: population must be positive");
  if (!(options.step_decay > 0.0 && options.step_decay < 1.0)) throw ConfigError("step_decay must lie in (0,1)");

  const std::size_t s = filtration->outcomes();
  const std::size_t dims = objective.uses_weight() ? 2 * s : s;
  Rng rng(seed);

  auto fresh = [&] {
    std::vector<double> x = random_terminal(dims, rng.next(), options.scale);
    return x;
  };
  auto score = [&](const std::vector<double>& x) {
    std::span<const double> all(x);
    return evaluate_objective(filtration, objective, all.first(s),
                              objective.uses_weight() ? all.subspan(s) : std::span<const double>{});
  };

  SearchResult result;
  result.objective = objective;
  result.seed = seed;
  result.budget = options.budget;

  std::vector<double> best_x;
  double best = -1.0;
  for (std::size_t i = 0; i < options.population; ++i) {
    auto x = fresh();
    const double v = score(x);
    if (v > best) {
      best = v;
      best_x = std::move(x);
    }
  }
  result.trace.reserve(options.budget + 1);
  result.trace.push_back(best);

  std::vector<double> current = best_x;
  double current_value = best;
  double step = options.initial_step;
  std::size_t stalled = 0;
  for (std::size_t it = 0; it < options.budget; ++it) {
    const std::size_t coord = static_cast<std::size_t>(rng.below(dims));
    const double delta = step * options.scale * rng.uniform(-1.0, 1.0);
    const double saved = current[coord];
    current[coord] += delta;
    const double v = score(current);
    if (v > current_value) {
      current_value = v;
      stalled = 0;
    } else {
      current[coord] = saved;
      if (++stalled >= 2 * dims) {
        stalled = 0;
        step *= options.step_decay;
        if (step < options.min_step) {
          // Converged locally: restart from a fresh random point.
          current = fresh();
          current_value = score(current);
          step = options.initial_step;
        }
      }
    }
    if (current_value > best) {
      best = current_value;
      best_x = current;
    }
    result.trace.push_back(best);
  }

  result.best_value = best;
  result.best_terminal.assign(best_x.begin(), best_x.begin() + static_cast<std::ptrdiff_t>(s));
  if (objective.uses_weight()) result.best_weight_terminal.assign(best_x.begin() + static_cast<std::ptrdiff_t>(s), best_x.end());
  return result;
}

ConstantProfile constant_profile(const std::shared_ptr<const MultiFiltration>& filtration,
                                 const Objective& objective, std::size_t trials, std::uint64_t seed,
                                 const SearchOptions& options, std::size_t threads) {
  if (!filtration) throw ConfigError("constant_profile: null filtration");
  require_compatible(*filtration, objective);
  ConstantProfile profile;
  profile.objective = objective;
  profile.seed = seed;
  profile.trial_seeds.resize(trials);
  profile.per_trial.assign(trials, 0.0);
  for (std::size_t t = 0; t < trials; ++t) profile.trial_seeds[t] = derive_seed(seed, t);
  std::vector<SearchResult> results(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    results[t] = extremal_search(filtration, objective, options, profile.trial_seeds[t]);
    profile.per_trial[t] = results[t].best_value;
  });
  if (trials > 0) {
    const auto top = std::max_element(profile.per_trial.begin(), profile.per_trial.end());
    profile.best = std::move(results[static_cast<std::size_t>(top - profile.per_trial.begin())]);
    std::vector<double> sorted = profile.per_trial;
    std::sort(sorted.begin(), sorted.end());
    profile.max = sorted.back();
    const std::size_t mid = trials / 2;
    profile.median = trials % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  }
  return profile;
}

}  // namespace mpm

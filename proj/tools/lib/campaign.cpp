#include "campaign.hpp"

#include <algorithm>
#include <numeric>

namespace mpm::campaign {

std::vector<IdentityTrial> identities(const FiltrationPtr& F, std::size_t trials, std::uint64_t seed,
                                      std::size_t threads) {
  std::vector<IdentityTrial> out(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto& trial = out[t];
    trial.seed_f = trial_seed(seed, t, 0);
    trial.seed_g = trial_seed(seed, t, 1);
    const auto f = random_martingale(F, trial.seed_f);
    const auto g = random_martingale(F, trial.seed_g);
    trial.residuals = calculus_residuals(f.family(), g.family(), {true, F.get()});
  });
  return out;
}

namespace {

template <class Check>
std::vector<SidesTrial> sides(const FiltrationPtr& F, std::size_t trials, std::uint64_t seed, std::size_t threads,
                              Check check) {
  std::vector<SidesTrial> out(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto& trial = out[t];
    trial.seed_f = trial_seed(seed, t, 0);
    trial.seed_a = trial_seed(seed, t, 1);
    trial.report = check(random_martingale(F, trial.seed_f), random_martingale(F, trial.seed_a));
  });
  return out;
}

}  // namespace

std::vector<SidesTrial> theorem_a(const FiltrationPtr& F, std::size_t trials, std::uint64_t seed, double constant,
                                  std::size_t threads) {
  return sides(F, trials, seed, threads, [&](const Martingale& f, const Martingale& a) {
    return theorem_a_check(f, a, std::nullopt, constant);
  });
}

std::vector<SidesTrial> theorem_b(const FiltrationPtr& F, std::size_t trials, std::uint64_t seed, double budget,
                                  std::size_t threads) {
  return sides(F, trials, seed, threads, [&](const Martingale& f, const Martingale& a) {
    return theorem_b_check(f, a, std::nullopt, budget);
  });
}

double weighted_quantile(std::span<const double> x, const SampleSpace& space, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("quantile must lie in [0,1]");
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  double mass = 0.0;
  for (std::size_t i : order) {
    mass += space.weight(i);
    if (mass >= q) return x[i];
  }
  return x[order.back()];
}

std::vector<BrossardTrial> brossard(const FiltrationPtr& F, std::size_t trials, std::uint64_t seed,
                                    const LambdaRule& rule, const BrossardOptions& options, std::size_t threads) {
  if (rule.absolute.has_value() == rule.quantile.has_value()) {
    throw ConfigError("brossard: give exactly one of an absolute lambda and a quantile");
  }
  std::vector<BrossardTrial> out(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto& trial = out[t];
    trial.seed = trial_seed(seed, t, 0);
    const auto f = boundary_reduce(random_martingale(F, trial.seed));
    if (rule.absolute) {
      trial.lambda = *rule.absolute;
    } else {
      const auto star = stopped_maximal(f.family());
      trial.lambda = weighted_quantile(star.terminal(), F->space(), *rule.quantile);
    }
    trial.certificate = brossard_certificate(f, trial.lambda, options);
  });
  return out;
}

std::vector<PNormTrial> pnorm(const FiltrationPtr& F, double p, std::size_t trials, std::uint64_t seed,
                              std::size_t threads) {
  std::vector<PNormTrial> out(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    auto& trial = out[t];
    trial.seed = trial_seed(seed, t, 0);
    trial.comparison = pnorm_comparison(boundary_reduce(random_martingale(F, trial.seed)), p);
  });
  return out;
}

double max_of(const std::vector<double>& values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

}  // namespace mpm::campaign

#pragma once

// Seeded trial batches shared by the CLI, the baseline derivation and the
// acceptance suite, so that all three draw identical martingales.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mpm/mpm.hpp"

namespace mpm::campaign {

/// Seed for stream `stream` of trial `trial`.
inline std::uint64_t trial_seed(std::uint64_t base, std::size_t trial, std::uint64_t stream) {
  return derive_seed(derive_seed(base, trial), stream);
}

using FiltrationPtr = std::shared_ptr<const MultiFiltration>;

struct IdentityTrial {
  std::uint64_t seed_f = 0;
  std::uint64_t seed_g = 0;
  CalculusResiduals residuals;
};

/// calculus_residuals, variance identity included, on random martingale pairs.
std::vector<IdentityTrial> identities(const FiltrationPtr& F, std::size_t trials, std::uint64_t seed,
                                      std::size_t threads = 1);

struct SidesTrial {
  std::uint64_t seed_f = 0;
  std::uint64_t seed_a = 0;
  TheoremSidesReport report;
};

std::vector<SidesTrial> theorem_a(const FiltrationPtr& F, std::size_t trials, std::uint64_t seed, double constant,
                                  std::size_t threads = 1);

std::vector<SidesTrial> theorem_b(const FiltrationPtr& F, std::size_t trials, std::uint64_t seed, double budget,
                                  std::size_t threads = 1);

/// Either an absolute threshold or a quantile of the distribution of f*.
struct LambdaRule {
  std::optional<double> absolute;
  std::optional<double> quantile;
};

/// Smallest v with P(x <= v) >= q.
double weighted_quantile(std::span<const double> x, const SampleSpace& space, double q);

struct BrossardTrial {
  std::uint64_t seed = 0;
  double lambda = 0.0;
  BrossardCertificate certificate;
};

/// Certificates for boundary-reduced random martingales.
std::vector<BrossardTrial> brossard(const FiltrationPtr& F, std::size_t trials, std::uint64_t seed,
                                    const LambdaRule& rule, const BrossardOptions& options, std::size_t threads = 1);

struct PNormTrial {
  std::uint64_t seed = 0;
  PNormComparison comparison;
};

std::vector<PNormTrial> pnorm(const FiltrationPtr& F, double p, std::size_t trials, std::uint64_t seed,
                              std::size_t threads = 1);

/// Largest of `values`, 0 for an empty list.
double max_of(const std::vector<double>& values);

}  // namespace mpm::campaign

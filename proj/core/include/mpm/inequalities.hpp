#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mpm/martingale.hpp"
#include "mpm/probability.hpp"

namespace mpm {

inline constexpr double kTheoremAConstant = 20.0;
/// Relative slack applied to the right-hand side of every inequality check.
inline constexpr double kRelativeSlack = 1e-9;

/// lhs <= constant * rhs * (1 + kRelativeSlack)
bool within_budget(double lhs, double rhs, double constant);

struct TheoremSidesReport {
  /// Per F_0-atom for the one-parameter check; a single entry otherwise.
  std::vector<double> lhs_per_atom;
  /// Unscaled right-hand side, i.e. without the constant.
  std::vector<double> rhs_per_atom;
  /// max lhs/rhs over entries with rhs > 0; 0 when there are none.
  double max_ratio = 0.0;
  double constant = 0.0;
  /// k-parameter check only: Σ_{m ∈ ∂_I(M)} E[(f*_m)^2 (Δ_I a_m)^2] for each I.
  std::vector<std::pair<AxisSet, double>> decomposition;
  bool pass = true;
};

/// One-parameter weighted square-function bound, evaluated per atom of F_0:
///   E(Σ_{m=1}^M (Δf_m)^2 a_{m-1}^2 | F_0)
///     <= constant * E(f_M^2 a_M^2 + Σ_{m=1}^M (f_m^2 + f_{m-1}^2)(Δa_m)^2 | F_0).
/// `horizon` defaults to the box corner. Throws ConfigError unless f and a
/// share a one-parameter filtration.
TheoremSidesReport theorem_a_check(const Martingale& f, const Martingale& a,
                                   std::optional<int> horizon = std::nullopt,
                                   double constant = kTheoremAConstant);

/// k-parameter bound
///   E Σ_{1<=m<=M} (Δf_m)^2 a_{m-1}^2 <= budget * Σ_I Σ_{m ∈ ∂_I(M)} E[(f*_m)^2 (Δ_I a_m)^2]
/// with a_{m-1} := (B_[k] a)_m. Throws StructuralError if F4 fails.
TheoremSidesReport theorem_b_check(const Martingale& f, const Martingale& a,
                                   std::optional<MultiIndex> horizon, double budget);

struct Enlargement {
  OutcomeSet set;
  double probability = 0.0;
  double threshold = 0.0;
};

/// Enl(E) = {1_E^* > R^{-k-1}}, with 1_E^* the maximal function of
/// m -> E[1_E | F_m] over the whole box.
Enlargement enlargement(const OutcomeSet& event, const MultiFiltration& filtration);
Enlargement enlargement(const OutcomeSet& event, const MultiFiltration& filtration, double regularity);

/// a_{m-1} >= 1 - R^{-k-1} off Enl^2(E); see baseline.hpp.
double stopping_lower_bound(double regularity, std::size_t k);

struct BrossardOptions {
  /// Threshold for lower_bound_on_a; defaults to stopping_lower_bound(R, k).
  std::optional<double> stopping_lower_bound;
  /// When present the weighted-sum step is checked against this budget.
  std::optional<double> theorem_b_budget;
};

struct ChainStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

struct BrossardCertificate {
  double lambda = 0.0;
  double regularity = 0.0;
  OutcomeSet e_set;
  OutcomeSet enl_e;
  OutcomeSet enl2_e;
  double p_e = 0.0;
  double p_enl_e = 0.0;
  double p_enl2_e = 0.0;
  /// max |Δ_I a_m(w)| over nonempty I, m >= 1 and w with f*_m(w) > lambda.
  double stopping_vanish_residual = 0.0;
  /// min of a_{m-1}(w) over w outside Enl^2(E) and 1 <= m <= M; 1 if empty.
  double lower_bound_on_a = 1.0;
  double tau = 0.0;
  /// P(Sf > lambda)
  double dist_lhs = 0.0;
  /// (P(E), lambda^-2 E[(f*)^2; E^c])
  std::array<double, 2> dist_rhs_terms{};
  /// dist_lhs / (sum of dist_rhs_terms), 0 when the denominator vanishes.
  double dist_ratio = 0.0;
  std::vector<ChainStep> chain;
  bool pass = false;
};

/// Evaluates every step of the good-lambda argument for P(Sf > lambda) at
/// E = {f* > lambda}. Requires a boundary-reduced martingale on a filtration
/// satisfying F4; throws InputError for lambda <= 0 or unreduced input.
BrossardCertificate brossard_certificate(const Martingale& f, double lambda, const BrossardOptions& options = {});

struct PNormComparison {
  double square_moment = 0.0;   // E[(Sf)^p]
  double maximal_moment = 0.0;  // E[(f*)^p]
  double ratio = 0.0;           // 0 when degenerate
  bool degenerate = false;      // E[(f*)^p] == 0
};

/// Exact E[(Sf)^p] and E[(f*)^p] for a boundary-reduced martingale.
PNormComparison pnorm_comparison(const Martingale& f, double p);

}  // namespace mpm

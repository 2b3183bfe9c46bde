#pragma once

#include <optional>
#include <vector>

#include "mpm/family.hpp"
#include "mpm/filtration.hpp"

namespace mpm {

/// B_I: backward shift along every axis in I, zero-padded at index 0.
IndexedFamily shift(const IndexedFamily& f, AxisSet axes);

/// Δ_I = composition of Δ_i = Id - B_i over i in I. Δ_∅ is the identity.
IndexedFamily diff(const IndexedFamily& f, AxisSet axes);

/// Sf(w) = sqrt(Σ_{0<=m<=M} (Δ_[k] f)_m(w)^2). Boundary indices are included;
/// apply boundary_reduce first to drop them.
std::vector<double> square_function(const IndexedFamily& f);

/// ∂_I(M) = {m : 1 <= m <= M, m_i = M_i for i not in I}, lexicographic.
/// Requires M >= 1 componentwise.
std::vector<MultiIndex> boundary_slice(const MultiIndex& upper, AxisSet axes);

struct CalculusResiduals {
  double product_rule = 0.0;        // Δ_i(fg) - f Δ_i g - (Δ_i f) B_i g
  double summation_by_parts = 0.0;  // Σ (Δ_i f) B_i g - f_M g_M + Σ f Δ_i g, per axis line
  double shift_multiplicative = 0.0;  // B_I(f^2) - (B_I f)^2, every I
  double square_difference = 0.0;   // Δ_i(f^2) - (Δ_i f)(f + B_i f)
  std::optional<double> variance_identity;  // E[(Δ_i f_m)^2 | F_{P_i m}] - E[Δ_i(f^2)_m | F_{P_i m}]

  double max() const;
};

struct CalculusOptions {
  bool variance_identity = false;
  /// Required when variance_identity is set; f must then be a martingale on it.
  const MultiFiltration* filtration = nullptr;
};

/// Max absolute residuals of the one-step calculus identities, applied along
/// every axis. Throws ConfigError when the variance identity is requested
/// without a filtration.
CalculusResiduals calculus_residuals(const IndexedFamily& f, const IndexedFamily& g,
                                     const CalculusOptions& options = {});

}  // namespace mpm

#pragma once

#include <cstdint>
#include <memory>
#include <span>

#include "mpm/family.hpp"
#include "mpm/filtration.hpp"

namespace mpm {

inline constexpr double kMartingaleTolerance = 1e-10;

struct MartingaleReport {
  /// max |E[f_{N_i(m)} | F_m] - f_m|
  double identity_residual = 0.0;
  /// max |f_m - E[f_m | F_m]|, zero iff f_m is constant on the atoms of F_m.
  double adaptedness_residual = 0.0;
  bool pass = true;
};

MartingaleReport check_martingale(const IndexedFamily& f, const MultiFiltration& filtration, double tol);

/// An IndexedFamily adapted to a filtration and satisfying the martingale
/// identity along every axis.
class Martingale {
 public:
  /// Validates with check_martingale at `tol`; throws ValidationError.
  Martingale(IndexedFamily family, std::shared_ptr<const MultiFiltration> filtration,
             double tol = kMartingaleTolerance);

  const IndexedFamily& family() const { return family_; }
  const MultiFiltration& filtration() const { return *filtration_; }
  const std::shared_ptr<const MultiFiltration>& filtration_ptr() const { return filtration_; }
  const Box& box() const { return family_.box(); }
  std::size_t outcomes() const { return family_.outcomes(); }
  std::span<const double> at(std::size_t linear) const { return family_.at(linear); }
  std::span<const double> terminal() const { return family_.terminal(); }

 private:
  struct Unchecked {};
  Martingale(Unchecked, IndexedFamily family, std::shared_ptr<const MultiFiltration> filtration);

  friend Martingale martingale_from_terminal(std::span<const double>, std::shared_ptr<const MultiFiltration>);
  friend Martingale boundary_reduce(const Martingale&);

  IndexedFamily family_;
  std::shared_ptr<const MultiFiltration> filtration_;
};

/// f_m = E[X | F_m] for every m in the box.
Martingale martingale_from_terminal(std::span<const double> terminal,
                                    std::shared_ptr<const MultiFiltration> filtration);

/// Closure of a terminal variable with independent centred uniform entries of
/// standard deviation `scale`.
Martingale random_martingale(std::shared_ptr<const MultiFiltration> filtration, std::uint64_t seed,
                             double scale = 1.0);

/// The terminal values random_martingale would close, exposed for search.
std::vector<double> random_terminal(std::size_t outcomes, std::uint64_t seed, double scale = 1.0);

/// f*_m = max over n <= m of |f_n|, pointwise.
IndexedFamily stopped_maximal(const IndexedFamily& f);

/// The martingale g with Δg_m = Δf_m for m >= 1 and Δg_m = 0 whenever some
/// m_i = 0:  g_m = Σ_{S ⊆ [k]} (-1)^{|S|} f_{m with coordinates in S zeroed}.
/// Requires F4 (checked unless the filtration is certified); throws
/// StructuralError otherwise.
Martingale boundary_reduce(const Martingale& f);

/// True when every full difference of f with a zero coordinate is within tol.
bool is_boundary_reduced(const IndexedFamily& f, double tol);

}  // namespace mpm

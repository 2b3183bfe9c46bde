#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mpm/filtration.hpp"
#include "mpm/probability.hpp"

namespace mpm {

/// A committed constant with the derivation that produced it.
struct BaselineEntry {
  std::string name;  // "theorem_b_budget", "enlargement_ratio", "stopping_lower_bound"
  std::size_t k = 0;
  std::optional<double> regularity;
  double value = 0.0;
  std::string provenance;
};

/// The versioned constants file consumed by budget-based checks.
class BaselineConstants {
 public:
  static constexpr int kVersion = 1;

  static BaselineConstants load(const std::filesystem::path& path);
  static BaselineConstants parse(const std::string& json_text);
  std::string to_json() const;
  void save(const std::filesystem::path& path) const;

  void set(BaselineEntry entry);
  const std::vector<BaselineEntry>& entries() const { return entries_; }

  /// Each throws ConfigError when no matching entry exists. Regularity
  /// constants match within 1e-9.
  double theorem_b_budget(std::size_t k) const;
  double enlargement_ratio(std::size_t k, double regularity) const;
  double stopping_lower_bound(std::size_t k, double regularity) const;

 private:
  const BaselineEntry* find(const std::string& name, std::size_t k, std::optional<double> regularity) const;

  std::vector<BaselineEntry> entries_;
};

/// Budget for the k-parameter weighted bound obtained by iterating the
/// one-parameter bound (constant c) over the axes. Each induction step
/// applies the one-parameter bound once and splits its right-hand side into
/// a pinned-coordinate term and two difference terms (the f and B_k f
/// parts); both feed the (k-1)-parameter hypothesis and the pinned term
/// meets the I ∌ k part of the decomposition while the two difference terms
/// meet the I ∋ k part, so C(k) = 2 c C(k-1) with C(0) = 1.
double derive_theorem_b_budget(std::size_t k, double one_parameter_constant = 20.0);
std::string theorem_b_budget_provenance(std::size_t k, double one_parameter_constant = 20.0);

struct EnlargementSurvey {
  double max_ratio = 0.0;   // max P(Enl E) / P(E) over nonempty E
  std::uint64_t worst_subset = 0;
  std::uint64_t subsets = 0;
  bool always_contains = true;  // E ⊆ Enl(E) for every E
  double regularity = 0.0;
};

/// Exhaustive pass over all 2^S events of a space with S <= 20.
EnlargementSurvey survey_enlargement(const MultiFiltration& filtration);

}  // namespace mpm

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mpm/multi_index.hpp"
#include "mpm/probability.hpp"

namespace mpm {

inline constexpr std::size_t kDefaultMaxOutcomes = std::size_t{1} << 16;

/// One factor of a product filtration: a refining sequence of partitions of
/// a factor space, levels 0..depth.
struct AxisTree {
  std::vector<double> weights;
  std::vector<std::vector<std::uint32_t>> levels;

  std::size_t depth() const { return levels.empty() ? 0 : levels.size() - 1; }
};

class MultiFiltration;

// See structure.hpp.
MultiFiltration certify_f4(MultiFiltration filtration, double tol);

/// Tensor product of per-axis trees. Outcome index is mixed-radix with the
/// first axis most significant.
MultiFiltration tensor_product(const std::vector<AxisTree>& axes,
                               std::size_t max_outcomes = kDefaultMaxOutcomes);

/// A k-parameter filtration on a finite space, indexed by the box [0, M].
///
/// Every partition in the box must refine its predecessor along each axis:
/// partitions[N_i(m)] refines partitions[m]. The constructor checks this and
/// reports the first offending pair in lexicographic order.
class MultiFiltration {
 public:
  MultiFiltration(SampleSpace space, MultiIndex upper, std::vector<Partition> partitions);

  const SampleSpace& space() const { return space_; }
  const Box& box() const { return box_; }
  std::size_t dim() const { return box_.dim(); }
  std::size_t outcomes() const { return space_.size(); }

  const Partition& at(std::size_t linear) const { return partitions_[linear]; }
  const Partition& at(const MultiIndex& m) const { return partitions_[box_.linear(m)]; }
  const std::vector<Partition>& partitions() const { return partitions_; }

  /// Axis filtration along `axis`: j -> F at the box corner with coordinate
  /// `axis` replaced by j. On a finite box this equals the sigma-algebra
  /// generated by the union over the remaining coordinates.
  std::vector<Partition> axis_filtration(std::size_t axis) const;

  /// True for product-constructor outputs, where F4 holds by construction,
  /// and for results of certify_f4. Checks that need F4 skip it when set.
  bool f4_certified() const { return f4_certified_; }

  /// Structural equality; the certification flag is not compared.
  bool operator==(const MultiFiltration& other) const;

 private:
  friend MultiFiltration tensor_product(const std::vector<AxisTree>& axes, std::size_t max_outcomes);
  friend MultiFiltration certify_f4(MultiFiltration filtration, double tol);

  SampleSpace space_;
  Box box_;
  std::vector<Partition> partitions_;
  bool f4_certified_ = false;
};

/// Product of k binary trees of the given depths, uniform weights.
MultiFiltration build_product_dyadic(const std::vector<int>& depths,
                                     std::size_t max_outcomes = kDefaultMaxOutcomes);

/// Product of k random refinement trees. Each atom splits into between 1 and
/// `max_children` children (capped so that every child keeps at least
/// `min_mass_ratio` of its parent's mass), hence R <= 1 / min_mass_ratio.
MultiFiltration build_product_random(const std::vector<int>& depths, int max_children,
                                     double min_mass_ratio, std::uint64_t seed,
                                     std::size_t max_outcomes = kDefaultMaxOutcomes);

/// Canonical text form; see docs/filtration_format.md.
std::string serialize_filtration(const MultiFiltration& filtration);
MultiFiltration parse_filtration(std::string_view text);

void save_filtration(const MultiFiltration& filtration, const std::filesystem::path& path);
MultiFiltration load_filtration(const std::filesystem::path& path);

}  // namespace mpm

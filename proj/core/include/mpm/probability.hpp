#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mpm {

inline constexpr double kWeightTolerance = 1e-12;

/// Indicator of an event, one flag per outcome.
using OutcomeSet = std::vector<bool>;

/// A finite probability space: strictly positive weights summing to one.
class SampleSpace {
 public:
  SampleSpace() = default;
  /// Throws ValidationError on non-positive weights or a sum off by more
  /// than kWeightTolerance.
  explicit SampleSpace(std::vector<double> weights);

  static SampleSpace uniform(std::size_t size);

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t outcome) const { return weights_[outcome]; }
  std::span<const double> weights() const { return weights_; }

  double expectation(std::span<const double> f) const;
  double probability(const OutcomeSet& event) const;

  bool operator==(const SampleSpace&) const = default;

 private:
  std::vector<double> weights_;
};

/// A sigma-algebra on a finite space, given by the atom containing each
/// outcome. Labels are stored canonically: atoms are numbered in order of
/// first appearance, so equal partitions compare equal.
class Partition {
 public:
  Partition() = default;
  /// Labels must cover 0..atom_count-1 with every atom non-empty.
  explicit Partition(std::vector<std::uint32_t> labels);

  static Partition trivial(std::size_t size);
  static Partition discrete(std::size_t size);

  std::size_t size() const { return labels_.size(); }
  std::size_t atom_count() const { return atom_count_; }
  std::uint32_t atom_of(std::size_t outcome) const { return labels_[outcome]; }
  std::span<const std::uint32_t> labels() const { return labels_; }

  /// Outcomes grouped by atom (CSR layout).
  struct Atoms {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> outcomes;
    std::span<const std::size_t> members(std::size_t atom) const {
      return std::span<const std::size_t>(outcomes).subspan(offsets[atom], offsets[atom + 1] - offsets[atom]);
    }
  };
  Atoms atoms() const;

  /// Probability of every atom under `space`.
  std::vector<double> atom_masses(const SampleSpace& space) const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::uint32_t> labels_;
  std::size_t atom_count_ = 0;
};

/// E[f | P]: the weighted atom average, constant on every atom of P.
std::vector<double> condexp(std::span<const double> f, const Partition& partition,
                            const SampleSpace& space);

/// True iff every atom of `fine` lies inside a single atom of `coarse`.
bool is_refinement(const Partition& fine, const Partition& coarse);

}  // namespace mpm

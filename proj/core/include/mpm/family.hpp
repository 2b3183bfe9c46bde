#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mpm/multi_index.hpp"

namespace mpm {

/// A real random variable for every index of a box, stored densely as
/// (M_1+1) x ... x (M_k+1) x S.
class IndexedFamily {
 public:
  IndexedFamily() = default;
  /// All zeros.
  IndexedFamily(Box box, std::size_t outcomes);
  /// Throws ValidationError on non-finite entries, ShapeError on a size mismatch.
  IndexedFamily(Box box, std::size_t outcomes, std::vector<double> values);

  const Box& box() const { return box_; }
  std::size_t dim() const { return box_.dim(); }
  std::size_t outcomes() const { return outcomes_; }

  std::span<const double> at(std::size_t linear) const {
    return std::span<const double>(values_).subspan(linear * outcomes_, outcomes_);
  }
  std::span<double> at(std::size_t linear) {
    return std::span<double>(values_).subspan(linear * outcomes_, outcomes_);
  }
  std::span<const double> at(const MultiIndex& m) const { return at(box_.linear(m)); }
  std::span<double> at(const MultiIndex& m) { return at(box_.linear(m)); }

  /// f_M, the variable at the upper corner.
  std::span<const double> terminal() const { return at(box_.volume() - 1); }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Largest absolute entry.
  double sup_norm() const;

  bool operator==(const IndexedFamily&) const = default;

 private:
  Box box_;
  std::size_t outcomes_ = 0;
  std::vector<double> values_;
};

void require_same_shape(const IndexedFamily& f, const IndexedFamily& g, const char* where);

IndexedFamily pointwise_product(const IndexedFamily& f, const IndexedFamily& g);
IndexedFamily pointwise_sum(const IndexedFamily& f, const IndexedFamily& g);
IndexedFamily pointwise_difference(const IndexedFamily& f, const IndexedFamily& g);
IndexedFamily pointwise_square(const IndexedFamily& f);

/// max |f - g| over every index and outcome.
double max_abs_difference(const IndexedFamily& f, const IndexedFamily& g);

}  // namespace mpm

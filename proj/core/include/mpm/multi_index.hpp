#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace mpm {

/// A k-tuple of non-negative integers. Axes are numbered from 0.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> coords);
  MultiIndex(std::initializer_list<int> coords);

  /// All-zero index of dimension k.
  static MultiIndex zeros(std::size_t k);

  std::size_t dim() const { return coords_.size(); }
  int operator[](std::size_t axis) const { return coords_[axis]; }
  const std::vector<int>& coords() const { return coords_; }

  /// N_i(m): coordinate `axis` incremented by one.
  MultiIndex next(std::size_t axis) const;
  /// P_i(m): coordinate `axis` decremented by one. Requires m_axis >= 1.
  MultiIndex prev(std::size_t axis) const;

  /// "(3,1)"
  std::string to_string() const;

  // Lexicographic; use `leq` for the componentwise partial order.
  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> coords_;
};

/// Componentwise partial order: a <= b iff a_i <= b_i for every axis.
bool leq(const MultiIndex& a, const MultiIndex& b);

/// Componentwise minimum a ∧ b.
MultiIndex meet_index(const MultiIndex& a, const MultiIndex& b);

/// A subset of the axes {0, ..., k-1}, stored as a bit mask.
class AxisSet {
 public:
  constexpr AxisSet() = default;
  AxisSet(std::initializer_list<std::size_t> axes);

  static AxisSet all(std::size_t k);
  static constexpr AxisSet from_mask(std::uint32_t mask) {
    AxisSet s;
    s.mask_ = mask;
    return s;
  }

  bool contains(std::size_t axis) const { return (mask_ >> axis) & 1u; }
  bool empty() const { return mask_ == 0; }
  std::size_t size() const;
  std::uint32_t mask() const { return mask_; }
  std::vector<std::size_t> axes() const;

  /// Throws ShapeError if any member is >= k.
  void require_within(std::size_t k) const;

  /// "{}" or "{1,2}" using 1-based axis labels.
  std::string to_string() const;

  auto operator<=>(const AxisSet&) const = default;

 private:
  std::uint32_t mask_ = 0;
};

inline constexpr std::size_t kMaxAxes = 16;

/// The index box {m : 0 <= m <= upper}, linearised in lexicographic
/// (row-major, last axis fastest) order.
class Box {
 public:
  Box() = default;
  explicit Box(MultiIndex upper);

  std::size_t dim() const { return upper_.dim(); }
  const MultiIndex& upper() const { return upper_; }
  std::size_t volume() const { return volume_; }
  std::size_t extent(std::size_t axis) const { return static_cast<std::size_t>(upper_[axis]) + 1; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  bool contains(const MultiIndex& m) const;
  std::size_t linear(const MultiIndex& m) const;
  MultiIndex index(std::size_t linear) const;
  int coord(std::size_t linear, std::size_t axis) const {
    return static_cast<int>((linear / strides_[axis]) % extent(axis));
  }
  /// True when some coordinate of the linear index is zero.
  bool on_lower_boundary(std::size_t linear) const;

  bool operator==(const Box& other) const { return upper_ == other.upper_; }

 private:
  MultiIndex upper_;
  std::vector<std::size_t> strides_;
  std::size_t volume_ = 0;
};

}  // namespace mpm

#include "mpm/multi_index.hpp"

#include <algorithm>
#include <bit>

#include "mpm/errors.hpp"

namespace mpm {

MultiIndex::MultiIndex(std::vector<int> coords) : coords_(std::move(coords)) {
  for (int c : coords_) {
    if (c < 0) throw ShapeError("multi-index coordinates must be non-negative");
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> coords)
    : MultiIndex(std::vector<int>(coords)) {}

MultiIndex MultiIndex::zeros(std::size_t k) { return MultiIndex(std::vector<int>(k, 0)); }

MultiIndex MultiIndex::next(std::size_t axis) const {
  MultiIndex out = *this;
  ++out.coords_.at(axis);
  return out;
}

MultiIndex MultiIndex::prev(std::size_t axis) const {
  if (coords_.at(axis) == 0) throw ShapeError("cannot step below zero on axis " + std::to_string(axis));
  MultiIndex out = *this;
  --out.coords_[axis];
  return out;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coords_[i]);
  }
  return s + ")";
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw ShapeError("multi-index dimension mismatch");
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

MultiIndex meet_index(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) {
    throw ShapeError("meet_index: dimensions " + std::to_string(a.dim()) + " and " +
                     std::to_string(b.dim()) + " differ");
  }
  std::vector<int> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = std::min(a[i], b[i]);
  return MultiIndex(std::move(out));
}

AxisSet::AxisSet(std::initializer_list<std::size_t> axes) {
  for (std::size_t a : axes) {
    if (a >= kMaxAxes) throw ShapeError("axis " + std::to_string(a) + " out of range");
    mask_ |= 1u << a;
  }
}

AxisSet AxisSet::all(std::size_t k) {
  if (k > kMaxAxes) throw ShapeError("too many axes");
  return from_mask((1u << k) - 1u);
}

std::size_t AxisSet::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<std::size_t> AxisSet::axes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 32; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

void AxisSet::require_within(std::size_t k) const {
  if (k < 32 && (mask_ >> k) != 0) {
    throw ShapeError("axis set " + to_string() + " is not a subset of [" + std::to_string(k) + "]");
  }
}

std::string AxisSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (std::size_t a : axes()) {
    if (!first) s += ",";
    s += std::to_string(a + 1);
    first = false;
  }
  return s + "}";
}

Box::Box(MultiIndex upper) : upper_(std::move(upper)) {
  if (upper_.dim() == 0) throw ShapeError("box dimension must be at least 1");
  if (upper_.dim() > kMaxAxes) throw ShapeError("box dimension exceeds " + std::to_string(kMaxAxes));
  strides_.assign(upper_.dim(), 1);
  volume_ = 1;
  for (std::size_t i = upper_.dim(); i-- > 0;) {
    strides_[i] = volume_;
    volume_ *= extent(i);
  }
}

bool Box::contains(const MultiIndex& m) const {
  return m.dim() == dim() && leq(m, upper_);
}

std::size_t Box::linear(const MultiIndex& m) const {
  if (!contains(m)) throw ShapeError("index " + m.to_string() + " outside box " + upper_.to_string());
  std::size_t lin = 0;
  for (std::size_t i = 0; i < dim(); ++i) lin += strides_[i] * static_cast<std::size_t>(m[i]);
  return lin;
}

MultiIndex Box::index(std::size_t linear) const {
  std::vector<int> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = coord(linear, i);
  return MultiIndex(std::move(c));
}

bool Box::on_lower_boundary(std::size_t linear) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (coord(linear, i) == 0) return true;
  }
  return false;
}

}  // namespace mpm

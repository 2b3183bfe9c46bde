#include "mpm/family.hpp"

#include <algorithm>
#include <cmath>

#include "mpm/errors.hpp"

namespace mpm {

IndexedFamily::IndexedFamily(Box box, std::size_t outcomes)
    : box_(std::move(box)), outcomes_(outcomes), values_(box_.volume() * outcomes, 0.0) {}

IndexedFamily::IndexedFamily(Box box, std::size_t outcomes, std::vector<double> values)
    : box_(std::move(box)), outcomes_(outcomes), values_(std::move(values)) {
  if (values_.size() != box_.volume() * outcomes_) {
    throw ShapeError("indexed family needs " + std::to_string(box_.volume() * outcomes_) + " values, got " +
                     std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("indexed family contains a non-finite value");
  }
}

double IndexedFamily::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void require_same_shape(const IndexedFamily& f, const IndexedFamily& g, const char* where) {
  if (!(f.box() == g.box()) || f.outcomes() != g.outcomes()) {
    throw ShapeError(std::string(where) + ": families have different boxes or sample sizes");
  }
}

namespace {

template <class Op>
IndexedFamily zip(const IndexedFamily& f, const IndexedFamily& g, const char* where, Op op) {
  require_same_shape(f, g, where);
  IndexedFamily out(f.box(), f.outcomes());
  auto& o = out.values();
  const auto& a = f.values();
  const auto& b = g.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = op(a[i], b[i]);
  return out;
}

}  // namespace

IndexedFamily pointwise_product(const IndexedFamily& f, const IndexedFamily& g) {
  return zip(f, g, "pointwise_product", [](double x, double y) { return x * y; });
}

IndexedFamily pointwise_sum(const IndexedFamily& f, const IndexedFamily& g) {
  return zip(f, g, "pointwise_sum", [](double x, double y) { return x + y; });
}

IndexedFamily pointwise_difference(const IndexedFamily& f, const IndexedFamily& g) {
  return zip(f, g, "pointwise_difference", [](double x, double y) { return x - y; });
}

IndexedFamily pointwise_square(const IndexedFamily& f) { return pointwise_product(f, f); }

double max_abs_difference(const IndexedFamily& f, const IndexedFamily& g) {
  require_same_shape(f, g, "max_abs_difference");
  double m = 0.0;
  for (std::size_t i = 0; i < f.values().size(); ++i) {
    m = std::max(m, std::abs(f.values()[i] - g.values()[i]));
  }
  return m;
}

}  // namespace mpm

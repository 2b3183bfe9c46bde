#include "mpm/operators.hpp"

#include <algorithm>
#include <cmath>

#include "mpm/errors.hpp"
#include "mpm/probability.hpp"

namespace mpm {

namespace {

IndexedFamily shift_axis(const IndexedFamily& f, std::size_t axis) {
  const auto& box = f.box();
  IndexedFamily out(box, f.outcomes());
  const std::size_t step = box.stride(axis);
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    if (box.coord(lin, axis) == 0) continue;
    const auto src = f.at(lin - step);
    std::copy(src.begin(), src.end(), out.at(lin).begin());
  }
  return out;
}

IndexedFamily diff_axis(const IndexedFamily& f, std::size_t axis) {
  const auto& box = f.box();
  IndexedFamily out = f;
  const std::size_t step = box.stride(axis);
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    if (box.coord(lin, axis) == 0) continue;
    auto dst = out.at(lin);
    const auto prev = f.at(lin - step);
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] -= prev[w];
  }
  return out;
}

void update_max(double& acc, double v) { acc = std::max(acc, std::abs(v)); }

}  // namespace

IndexedFamily shift(const IndexedFamily& f, AxisSet axes) {
  axes.require_within(f.dim());
  IndexedFamily out = f;
  for (auto axis : axes.axes()) out = shift_axis(out, axis);
  return out;
}

IndexedFamily diff(const IndexedFamily& f, AxisSet axes) {
  axes.require_within(f.dim());
  IndexedFamily out = f;
  for (auto axis : axes.axes()) out = diff_axis(out, axis);
  return out;
}

std::vector<double> square_function(const IndexedFamily& f) {
  const auto d = diff(f, AxisSet::all(f.dim()));
  std::vector<double> acc(f.outcomes(), 0.0);
  for (std::size_t lin = 0; lin < d.box().volume(); ++lin) {
    const auto v = d.at(lin);
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] += v[w] * v[w];
  }
  for (auto& x : acc) x = std::sqrt(x);
  return acc;
}

std::vector<MultiIndex> boundary_slice(const MultiIndex& upper, AxisSet axes) {
  const std::size_t k = upper.dim();
  if (k == 0) throw ShapeError("boundary_slice: empty multi-index");
  axes.require_within(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (upper[i] < 1) throw ShapeError("boundary_slice needs M >= 1 componentwise, got " + upper.to_string());
  }
  std::vector<MultiIndex> out;
  std::vector<int> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = axes.contains(i) ? 1 : upper[i];
  while (true) {
    out.emplace_back(c);
    // Odometer over the free axes, last axis fastest.
    std::size_t i = k;
    while (i-- > 0) {
      if (!axes.contains(i)) continue;
      if (c[i] < upper[i]) {
        ++c[i];
        break;
      }
      c[i] = 1;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

double CalculusResiduals::max() const {
  double m = std::max({product_rule, summation_by_parts, shift_multiplicative, square_difference});
  if (variance_identity) m = std::max(m, *variance_identity);
  return m;
}

CalculusResiduals calculus_residuals(const IndexedFamily& f, const IndexedFamily& g,
                                     const CalculusOptions& options) {
  require_same_shape(f, g, "calculus_residuals");
  if (options.variance_identity && options.filtration == nullptr) {
    throw ConfigError("calculus_residuals: the variance identity needs a filtration");
  }
  const auto& box = f.box();
  const std::size_t k = box.dim();
  const std::size_t s = f.outcomes();
  CalculusResiduals r;

  const auto fg = pointwise_product(f, g);
  const auto f2 = pointwise_square(f);

  for (std::size_t axis = 0; axis < k; ++axis) {
    const AxisSet i{axis};
    const auto df = diff(f, i);
    const auto dg = diff(g, i);
    const auto bf = shift(f, i);
    const auto bg = shift(g, i);
    const auto dfg = diff(fg, i);
    const auto df2 = diff(f2, i);

    for (std::size_t n = 0; n < f.values().size(); ++n) {
      const double fv = f.values()[n];
      update_max(r.product_rule, dfg.values()[n] - fv * dg.values()[n] - df.values()[n] * bg.values()[n]);
      update_max(r.square_difference, df2.values()[n] - df.values()[n] * (fv + bf.values()[n]));
    }

    // Summation by parts on every line parallel to `axis`.
    const std::size_t step = box.stride(axis);
    const auto top = static_cast<std::size_t>(box.upper()[axis]);
    for (std::size_t start = 0; start < box.volume(); ++start) {
      if (box.coord(start, axis) != 0) continue;
      for (std::size_t w = 0; w < s; ++w) {
        double lhs = 0.0, rhs_sum = 0.0;
        for (std::size_t j = 0; j <= top; ++j) {
          const std::size_t lin = start + j * step;
          lhs += df.at(lin)[w] * bg.at(lin)[w];
          rhs_sum += f.at(lin)[w] * dg.at(lin)[w];
        }
        const std::size_t last = start + top * step;
        update_max(r.summation_by_parts, lhs - f.at(last)[w] * g.at(last)[w] + rhs_sum);
      }
    }

    if (options.variance_identity) {
      const auto& filtration = *options.filtration;
      if (!(filtration.box() == box) || filtration.outcomes() != s) {
        throw ShapeError("calculus_residuals: filtration shape differs from the families");
      }
      double acc = r.variance_identity.value_or(0.0);
      const auto df_sq = pointwise_square(df);
      for (std::size_t lin = 0; lin < box.volume(); ++lin) {
        if (box.coord(lin, axis) == 0) continue;
        const auto& past = filtration.at(lin - step);
        const auto lhs = condexp(df_sq.at(lin), past, filtration.space());
        const auto rhs = condexp(df2.at(lin), past, filtration.space());
        for (std::size_t w = 0; w < s; ++w) update_max(acc, lhs[w] - rhs[w]);
      }
      r.variance_identity = acc;
    }
  }

  // Multiplicativity of B_I for every subset of axes.
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    const auto axes = AxisSet::from_mask(mask);
    const auto lhs = shift(f2, axes);
    const auto bf = shift(f, axes);
    for (std::size_t n = 0; n < lhs.values().size(); ++n) {
      update_max(r.shift_multiplicative, lhs.values()[n] - bf.values()[n] * bf.values()[n]);
    }
  }
  return r;
}

}  // namespace mpm

#include "mpm/martingale.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "mpm/errors.hpp"
#include "mpm/operators.hpp"
#include "mpm/rng.hpp"
#include "mpm/structure.hpp"

namespace mpm {

MartingaleReport check_martingale(const IndexedFamily& f, const MultiFiltration& filtration, double tol) {
  const auto& box = filtration.box();
  if (!(f.box() == box) || f.outcomes() != filtration.outcomes()) {
    throw ShapeError("check_martingale: family and filtration shapes differ");
  }
  const auto& space = filtration.space();
  MartingaleReport report;
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    const auto fm = f.at(lin);
    const auto projected = condexp(fm, filtration.at(lin), space);
    for (std::size_t w = 0; w < fm.size(); ++w) {
      report.adaptedness_residual = std::max(report.adaptedness_residual, std::abs(fm[w] - projected[w]));
    }
    for (std::size_t axis = 0; axis < box.dim(); ++axis) {
      if (box.coord(lin, axis) == box.upper()[axis]) continue;
      const auto cond = condexp(f.at(lin + box.stride(axis)), filtration.at(lin), space);
      for (std::size_t w = 0; w < fm.size(); ++w) {
        report.identity_residual = std::max(report.identity_residual, std::abs(cond[w] - fm[w]));
      }
    }
  }
  report.pass = report.identity_residual <= tol && report.adaptedness_residual <= tol;
  return report;
}

Martingale::Martingale(IndexedFamily family, std::shared_ptr<const MultiFiltration> filtration, double tol)
    : family_(std::move(family)), filtration_(std::move(filtration)) {
  if (!filtration_) throw ConfigError("martingale without a filtration");
  const auto report = check_martingale(family_, *filtration_, tol);
  if (!report.pass) {
    throw ValidationError("not a martingale: identity residual " + std::to_string(report.identity_residual) +
                          ", adaptedness residual " + std::to_string(report.adaptedness_residual));
  }
}

Martingale::Martingale(Unchecked, IndexedFamily family, std::shared_ptr<const MultiFiltration> filtration)
    : family_(std::move(family)), filtration_(std::move(filtration)) {}

Martingale martingale_from_terminal(std::span<const double> terminal,
                                    std::shared_ptr<const MultiFiltration> filtration) {
  if (!filtration) throw ConfigError("martingale_from_terminal: null filtration");
  if (terminal.size() != filtration->outcomes()) {
    throw ShapeError("terminal variable has " + std::to_string(terminal.size()) + " entries, space has " +
                     std::to_string(filtration->outcomes()));
  }
  for (double x : terminal) {
    if (!std::isfinite(x)) throw ValidationError("terminal variable is not finite");
  }
  const auto& box = filtration->box();
  IndexedFamily family(box, filtration->outcomes());
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    const auto g = condexp(terminal, filtration->at(lin), filtration->space());
    std::copy(g.begin(), g.end(), family.at(lin).begin());
  }
  return Martingale(Martingale::Unchecked{}, std::move(family), std::move(filtration));
}

std::vector<double> random_terminal(std::size_t outcomes, std::uint64_t seed, double scale) {
  if (!(scale > 0.0)) throw InputError("scale must be positive");
  // Uniform on [-sqrt(3) s, sqrt(3) s) has standard deviation s.
  const double half_width = std::sqrt(3.0) * scale;
  Rng rng(seed);
  std::vector<double> x(outcomes);
  for (auto& v : x) v = rng.uniform(-half_width, half_width);
  return x;
}

Martingale random_martingale(std::shared_ptr<const MultiFiltration> filtration, std::uint64_t seed, double scale) {
  if (!filtration) throw ConfigError("random_martingale: null filtration");
  const auto x = random_terminal(filtration->outcomes(), seed, scale);
  return martingale_from_terminal(x, std::move(filtration));
}

IndexedFamily stopped_maximal(const IndexedFamily& f) {
  IndexedFamily out = f;
  for (auto& v : out.values()) v = std::abs(v);
  const auto& box = f.box();
  const std::size_t s = f.outcomes();
  // Running maximum along each axis in turn yields the max over n <= m.
  for (std::size_t axis = 0; axis < box.dim(); ++axis) {
    const std::size_t step = box.stride(axis);
    for (std::size_t lin = 0; lin < box.volume(); ++lin) {
      if (box.coord(lin, axis) == 0) continue;
      auto cur = out.at(lin);
      const auto prev = out.at(lin - step);
      for (std::size_t w = 0; w < s; ++w) cur[w] = std::max(cur[w], prev[w]);
    }
  }
  return out;
}

Martingale boundary_reduce(const Martingale& f) {
  const auto& filtration = f.filtration();
  if (!filtration.f4_certified()) {
    const auto f4 = check_f4(filtration, 1e-12);
    if (!f4.pass) {
      throw StructuralError("boundary_reduce needs F4; residual " + std::to_string(f4.max_residual) + " at " +
                            f4.worst_a.to_string() + ", " + f4.worst_b.to_string());
    }
  }
  const auto& box = f.box();
  const std::size_t k = box.dim();
  const std::size_t s = f.outcomes();
  IndexedFamily g(box, s);
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    auto out = g.at(lin);
    if (box.on_lower_boundary(lin)) continue;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      std::size_t corner = lin;
      for (std::size_t axis = 0; axis < k; ++axis) {
        if ((mask >> axis) & 1u) corner -= box.stride(axis) * static_cast<std::size_t>(box.coord(lin, axis));
      }
      const double sign = (std::popcount(mask) % 2 == 0) ? 1.0 : -1.0;
      const auto src = f.at(corner);
      for (std::size_t w = 0; w < s; ++w) out[w] += sign * src[w];
    }
  }
  Martingale reduced(Martingale::Unchecked{}, std::move(g), f.filtration_ptr());
  const auto report = check_martingale(reduced.family(), filtration, kMartingaleTolerance);
  if (!report.pass) {
    throw StructuralError("boundary-reduced family is not a martingale (residual " +
                          std::to_string(std::max(report.identity_residual, report.adaptedness_residual)) + ")");
  }
  return reduced;
}

bool is_boundary_reduced(const IndexedFamily& f, double tol) {
  const auto d = diff(f, AxisSet::all(f.dim()));
  const auto& box = f.box();
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    if (!box.on_lower_boundary(lin)) continue;
    for (double v : d.at(lin)) {
      if (std::abs(v) > tol) return false;
    }
  }
  return true;
}

}  // namespace mpm

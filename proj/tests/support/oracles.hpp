#pragma once

// Brute-force reference implementations used only by tests. They work
// from definitions, outcome by outcome, and share no code paths with the
// library beyond the data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mpm/filtration.hpp"
#include "mpm/family.hpp"
#include "mpm/rng.hpp"

namespace oracle {

/// E[f | P](x) = Σ_{y ~ x} w(y) f(y) / Σ_{y ~ x} w(y), quadratic in S.
inline std::vector<double> condexp(const std::vector<double>& f, const mpm::Partition& p,
                                   const mpm::SampleSpace& space) {
  const std::size_t s = f.size();
  std::vector<double> out(s);
  for (std::size_t x = 0; x < s; ++x) {
    double num = 0.0, den = 0.0;
    for (std::size_t y = 0; y < s; ++y) {
      if (p.atom_of(y) == p.atom_of(x)) {
        num += space.weight(y) * f[y];
        den += space.weight(y);
      }
    }
    out[x] = num / den;
  }
  return out;
}

/// max over all a, b in the box and all indicators 1_w of
/// |E[E[1_w|F_a]|F_b] - E[1_w|F_{a∧b}]|.
inline double f4_residual(const mpm::MultiFiltration& F) {
  const auto& box = F.box();
  const std::size_t s = F.outcomes();
  double worst = 0.0;
  for (std::size_t la = 0; la < box.volume(); ++la) {
    for (std::size_t lb = 0; lb < box.volume(); ++lb) {
      const auto meet = mpm::meet_index(box.index(la), box.index(lb));
      for (std::size_t w = 0; w < s; ++w) {
        std::vector<double> e(s, 0.0);
        e[w] = 1.0;
        const auto twice = condexp(condexp(e, F.at(la), F.space()), F.at(lb), F.space());
        const auto once = condexp(e, F.at(meet), F.space());
        for (std::size_t x = 0; x < s; ++x) worst = std::max(worst, std::abs(twice[x] - once[x]));
      }
    }
  }
  return worst;
}

/// max over single steps m -> N_i(m) and outcomes x of P(A(x)) / P(B(x)),
/// A the coarse atom and B the fine atom containing x.
inline double regularity(const mpm::MultiFiltration& F) {
  const auto& box = F.box();
  const std::size_t s = F.outcomes();
  double r = 1.0;
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    const auto m = box.index(lin);
    for (std::size_t i = 0; i < box.dim(); ++i) {
      if (m[i] == box.upper()[i]) continue;
      const auto& coarse = F.at(lin);
      const auto& fine = F.at(m.next(i));
      for (std::size_t x = 0; x < s; ++x) {
        double pa = 0.0, pb = 0.0;
        for (std::size_t y = 0; y < s; ++y) {
          if (coarse.atom_of(y) == coarse.atom_of(x)) pa += F.space().weight(y);
          if (fine.atom_of(y) == fine.atom_of(x)) pb += F.space().weight(y);
        }
        r = std::max(r, pa / pb);
      }
    }
  }
  return r;
}

/// Value of a family at index m, outcome w, or 0 if any coordinate of m is
/// negative (the zero-padding convention).
inline double value(const mpm::IndexedFamily& f, const std::vector<int>& m, std::size_t w) {
  for (int c : m) {
    if (c < 0) return 0.0;
  }
  return f.at(mpm::MultiIndex(m))[w];
}

/// Full difference by inclusion-exclusion over the 2^k corners.
inline double full_difference(const mpm::IndexedFamily& f, const mpm::MultiIndex& m, std::size_t w) {
  const std::size_t k = m.dim();
  double acc = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> c = m.coords();
    int sign = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1u) {
        c[i] -= 1;
        sign = -sign;
      }
    }
    acc += sign * value(f, c, w);
  }
  return acc;
}

/// Filtration with a random refining chain per axis on a common space,
/// combined by common refinement. Generally fails F4.
inline mpm::MultiFiltration random_join_filtration(std::size_t outcomes, const std::vector<int>& depths,
                                                   std::uint64_t seed) {
  mpm::Rng rng(seed);
  std::vector<double> w(outcomes);
  double total = 0.0;
  for (auto& x : w) {
    x = 0.2 + rng.uniform();
    total += x;
  }
  for (auto& x : w) x /= total;
  // chains[i][j]: labels of axis i at level j, refining in j.
  std::vector<std::vector<std::vector<std::uint32_t>>> chains;
  for (int d : depths) {
    std::vector<std::vector<std::uint32_t>> chain{std::vector<std::uint32_t>(outcomes, 0)};
    for (int j = 1; j <= d; ++j) {
      auto next = chain.back();
      for (auto& l : next) l = 2 * l + static_cast<std::uint32_t>(rng.below(2));
      chain.push_back(next);
    }
    chains.push_back(chain);
  }
  mpm::Box box{mpm::MultiIndex(std::vector<int>(depths))};
  std::vector<mpm::Partition> parts;
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    std::vector<std::uint64_t> key(outcomes, 0);
    for (std::size_t i = 0; i < depths.size(); ++i) {
      const auto& lv = chains[i][static_cast<std::size_t>(box.coord(lin, i))];
      for (std::size_t x = 0; x < outcomes; ++x) key[x] = (key[x] << 8) + lv[x];
    }
    auto sorted = key;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::uint32_t> labels(outcomes);
    for (std::size_t x = 0; x < outcomes; ++x) {
      labels[x] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), key[x]) - sorted.begin());
    }
    parts.emplace_back(labels);
  }
  return mpm::MultiFiltration(mpm::SampleSpace(w), box.upper(), std::move(parts));
}

}  // namespace oracle

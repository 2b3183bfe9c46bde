#include <doctest.h>

#include <cmath>

#include "mpm/errors.hpp"
#include "mpm/multi_index.hpp"
#include "mpm/probability.hpp"
#include "mpm/rng.hpp"
#include "oracles.hpp"

using namespace mpm;

namespace {

Partition random_partition(std::size_t s, std::size_t max_atoms, Rng& rng) {
  std::vector<std::uint32_t> labels(s);
  for (auto& l : labels) l = static_cast<std::uint32_t>(rng.below(max_atoms));
  // Squeeze to contiguous ids.
  std::vector<std::uint32_t> map(max_atoms, ~0u);
  std::uint32_t next = 0;
  for (auto& l : labels) {
    if (map[l] == ~0u) map[l] = next++;
    l = map[l];
  }
  return Partition(labels);
}

SampleSpace random_space(std::size_t s, Rng& rng) {
  std::vector<double> w(s);
  double total = 0.0;
  for (auto& x : w) total += (x = 0.05 + rng.uniform());
  for (auto& x : w) x /= total;
  return SampleSpace(w);
}

}  // namespace

TEST_CASE("sample space validates weights") {
  CHECK_NOTHROW(SampleSpace({0.25, 0.75}));
  CHECK_THROWS_AS(SampleSpace({0.5, 0.4}), ValidationError);
  CHECK_THROWS_AS(SampleSpace({1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(SampleSpace({1.5, -0.5}), ValidationError);
  CHECK_THROWS_AS(SampleSpace(std::vector<double>{}), ValidationError);
  CHECK(SampleSpace::uniform(8).expectation(std::vector<double>(8, 3.0)) == doctest::Approx(3.0));
}

TEST_CASE("partition validates and canonicalises labels") {
  CHECK_THROWS_AS(Partition({0, 2, 2}), ValidationError);  // id 1 missing
  CHECK_THROWS_AS(Partition({0, 5}), ValidationError);
  const Partition p({1, 1, 0, 0});
  CHECK(p.atom_count() == 2);
  CHECK(p == Partition({0, 0, 1, 1}));
  const auto atoms = p.atoms();
  CHECK(atoms.members(0).size() == 2);
  CHECK(atoms.members(0)[0] == 0);
  CHECK(atoms.members(1)[1] == 3);
}

TEST_CASE("condexp on two dyadic atoms") {
  const auto space = SampleSpace::uniform(4);
  const Partition p({0, 0, 1, 1});
  const std::vector<double> f{1, 3, 5, 7};
  CHECK(condexp(f, p, space) == std::vector<double>{2, 2, 6, 6});
}

TEST_CASE("condexp on the trivial and discrete partitions") {
  Rng rng(11);
  const auto space = random_space(9, rng);
  std::vector<double> f(9);
  for (auto& x : f) x = rng.uniform(-2, 2);
  const auto mean = space.expectation(f);
  for (double v : condexp(f, Partition::trivial(9), space)) CHECK(v == doctest::Approx(mean).epsilon(1e-14));
  const auto same = condexp(f, Partition::discrete(9), space);
  for (std::size_t w = 0; w < 9; ++w) CHECK(same[w] == doctest::Approx(f[w]).epsilon(1e-15));
}

TEST_CASE("condexp rejects mismatched shapes") {
  const auto space = SampleSpace::uniform(4);
  CHECK_THROWS_AS(condexp(std::vector<double>{1, 2, 3}, Partition::trivial(4), space), ShapeError);
  CHECK_THROWS_AS(condexp(std::vector<double>{1, 2, 3, 4}, Partition::trivial(3), space), ShapeError);
}

TEST_CASE("condexp matches the brute-force oracle and its invariants") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t s = 1 + rng.below(24);
    const auto space = random_space(s, rng);
    const auto fine = random_partition(s, 1 + rng.below(s), rng);
    // Coarsen by merging atoms of the fine partition.
    const std::size_t groups = 1 + rng.below(fine.atom_count());
    std::vector<std::uint32_t> merge(fine.atom_count());
    for (auto& g : merge) g = static_cast<std::uint32_t>(rng.below(groups));
    std::vector<std::uint32_t> coarse_labels(s);
    for (std::size_t w = 0; w < s; ++w) coarse_labels[w] = merge[fine.atom_of(w)];
    std::vector<std::uint32_t> map(groups, ~0u);
    std::uint32_t next = 0;
    for (auto& l : coarse_labels) {
      if (map[l] == ~0u) map[l] = next++;
      l = map[l];
    }
    const Partition coarse(coarse_labels);
    REQUIRE(is_refinement(fine, coarse));

    std::vector<double> f(s);
    for (auto& x : f) x = rng.uniform(-5, 5);
    const auto g = condexp(f, fine, space);
    const auto expected = oracle::condexp(f, fine, space);
    for (std::size_t w = 0; w < s; ++w) CHECK(std::abs(g[w] - expected[w]) <= 1e-12);

    // Mean preservation.
    CHECK(std::abs(space.expectation(g) - space.expectation(f)) <= 1e-12);
    // Idempotence.
    const auto gg = condexp(g, fine, space);
    for (std::size_t w = 0; w < s; ++w) CHECK(std::abs(gg[w] - g[w]) <= 1e-12);
    // Tower property.
    const auto tower = condexp(g, coarse, space);
    const auto direct = condexp(f, coarse, space);
    for (std::size_t w = 0; w < s; ++w) CHECK(std::abs(tower[w] - direct[w]) <= 1e-12);
    // L2 contraction.
    std::vector<double> f2(s), g2(s);
    for (std::size_t w = 0; w < s; ++w) {
      f2[w] = f[w] * f[w];
      g2[w] = g[w] * g[w];
    }
    CHECK(space.expectation(g2) <= space.expectation(f2) + 1e-12);
  }
}

TEST_CASE("is_refinement") {
  const Partition singletons = Partition::discrete(4);
  const Partition halves({0, 0, 1, 1});
  const Partition crossed({0, 1, 0, 1});
  CHECK(is_refinement(singletons, halves));
  CHECK_FALSE(is_refinement(halves, crossed));
  CHECK(is_refinement(halves, halves));
  CHECK(is_refinement(halves, Partition::trivial(4)));
  CHECK_FALSE(is_refinement(Partition::trivial(4), halves));
  CHECK_THROWS_AS(is_refinement(halves, Partition::trivial(3)), ShapeError);
}

TEST_CASE("meet_index") {
  CHECK(meet_index(MultiIndex{3, 1}, MultiIndex{2, 5}) == MultiIndex{2, 1});
  CHECK(meet_index(MultiIndex{4, 2, 7}, MultiIndex{4, 2, 7}) == MultiIndex{4, 2, 7});
  CHECK(meet_index(MultiIndex{0, 7}, MultiIndex{4, 0}) == MultiIndex{0, 0});
  CHECK_THROWS_AS(meet_index(MultiIndex{1, 2}, MultiIndex{1}), ShapeError);
}

TEST_CASE("box linearisation is lexicographic") {
  const Box box(MultiIndex{2, 3});
  CHECK(box.volume() == 12);
  std::size_t lin = 0;
  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; b <= 3; ++b) {
      CHECK(box.linear(MultiIndex{a, b}) == lin);
      CHECK(box.index(lin) == MultiIndex{a, b});
      ++lin;
    }
  }
  CHECK_THROWS_AS(box.linear(MultiIndex{3, 0}), ShapeError);
  CHECK(leq(MultiIndex{1, 2}, MultiIndex{2, 2}));
  CHECK_FALSE(leq(MultiIndex{1, 3}, MultiIndex{2, 2}));
}

TEST_CASE("axis sets") {
  const AxisSet s{0, 2};
  CHECK(s.size() == 2);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(1));
  CHECK(s.to_string() == "{1,3}");
  CHECK(AxisSet::all(3).mask() == 7u);
  CHECK_THROWS_AS(s.require_within(2), ShapeError);
  CHECK_NOTHROW(s.require_within(3));
}

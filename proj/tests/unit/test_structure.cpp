#include <doctest.h>

#include <cmath>

#include "mpm/errors.hpp"
#include "mpm/structure.hpp"
#include "oracles.hpp"

using namespace mpm;

namespace {

// Two-parameter filtration on 4 uniform points, box (1,1). F_{1,0} and
// F_{0,1} both split {0,1} | {2,3} but F_{0,0} is trivial, so the meet of
// (1,0) and (0,1) loses information both sides carry.
MultiFiltration entangled() {
  const Partition trivial = Partition::trivial(4);
  const Partition halves({0, 0, 1, 1});
  return MultiFiltration(SampleSpace::uniform(4), MultiIndex{1, 1},
                         {trivial, halves, halves, Partition::discrete(4)});
}

MultiFiltration one_split(double big) {
  return MultiFiltration(SampleSpace({big, 1.0 - big}), MultiIndex{1},
                         {Partition::trivial(2), Partition::discrete(2)});
}

}  // namespace

TEST_CASE("F4 holds on dyadic products") {
  const auto F = build_product_dyadic({3, 3});
  const auto report = check_f4(F);
  CHECK(report.pass);
  CHECK(report.max_residual <= 1e-12);
  CHECK(oracle::f4_residual(F) <= 1e-12);
}

TEST_CASE("F4 is vacuous with one parameter") {
  const auto F = build_product_random({5}, 3, 0.2, 7);
  CHECK(check_f4(F).pass);
  CHECK(check_f4(one_split(0.75)).pass);
}

TEST_CASE("entangled filtration fails F4") {
  const auto F = entangled();
  const auto report = check_f4(F);
  CHECK_FALSE(report.pass);
  // Indicator of one point: E[E[1_w|F_{1,0}]|F_{0,1}] = 1/2 on its half
  // while E[1_w|F_{0,0}] = 1/4.
  CHECK(report.max_residual == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(oracle::f4_residual(F) == doctest::Approx(0.25).epsilon(1e-15));
  const bool worst_is_cross = (report.worst_a == MultiIndex{1, 0} && report.worst_b == MultiIndex{0, 1}) ||
                              (report.worst_a == MultiIndex{0, 1} && report.worst_b == MultiIndex{1, 0});
  CHECK(worst_is_cross);
}

TEST_CASE("check_f4 agrees with the brute-force oracle on random joins") {
  std::size_t failing = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t s = 3 + seed % 6;
    const std::vector<int> depths = seed % 3 == 0 ? std::vector<int>{2, 1, 1} : std::vector<int>{2, 2};
    const auto F = oracle::random_join_filtration(s, depths, seed);
    const auto report = check_f4(F);
    const double expected = oracle::f4_residual(F);
    CHECK(std::abs(report.max_residual - expected) <= 1e-12);
    CHECK(report.pass == (expected <= 1e-12));
    if (!report.pass) ++failing;
  }
  // The generator should exercise both outcomes.
  CHECK(failing > 0);
  CHECK(failing < 40);
}

TEST_CASE("constructor outputs pass F4 with the flag cleared") {
  // Rebuild without the tensor-product flag so the check actually runs.
  for (const auto& depths : {std::vector<int>{2, 2}, std::vector<int>{1, 2, 1}, std::vector<int>{3, 1}}) {
    const auto built = build_product_random(depths, 3, 0.25, 99);
    const MultiFiltration F(built.space(), built.box().upper(), built.partitions());
    CHECK_FALSE(F.f4_certified());
    CHECK(check_f4(F).max_residual <= 1e-12);
    CHECK(oracle::f4_residual(F) <= 1e-12);
  }
}

TEST_CASE("regularity constant") {
  CHECK(regularity_constant(build_product_dyadic({1})) == 2.0);
  CHECK(regularity_constant(build_product_dyadic({3, 2})) == 2.0);
  CHECK(regularity_constant(build_product_dyadic({2, 1, 2})) == 2.0);
  CHECK(regularity_constant(one_split(0.75)) == doctest::Approx(4.0).epsilon(1e-15));

  const Partition same({0, 0, 1});
  const MultiFiltration flat(SampleSpace({0.2, 0.3, 0.5}), MultiIndex{2}, {same, same, same});
  CHECK(regularity_constant(flat) == 1.0);
}

TEST_CASE("regularity matches the per-outcome oracle") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto F = seed % 2 ? build_product_random({2, 2}, 4, 0.1, seed)
                            : oracle::random_join_filtration(6, {2, 1}, seed);
    const double r = regularity_constant(F);
    CHECK(r >= 1.0);
    CHECK(std::abs(r - oracle::regularity(F)) <= 1e-12 * r);
  }
}

TEST_CASE("random products respect the mass ratio") {
  for (double r : {0.5, 0.25, 0.1}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto F = build_product_random({3, 2}, 4, r, seed);
      CHECK(regularity_constant(F) <= 1.0 / r + 1e-12);
    }
  }
  CHECK(regularity_constant(build_product_random({4}, 2, 0.5, 3)) <= 2.0 + 1e-12);
}

TEST_CASE("non-refining filtrations never reach the regularity computation") {
  CHECK_THROWS_AS(MultiFiltration(SampleSpace::uniform(4), MultiIndex{1},
                                  {Partition({0, 0, 1, 1}), Partition({0, 1, 0, 1})}),
                  ValidationError);
}

TEST_CASE("certify_f4") {
  const auto built = build_product_dyadic({2, 1});
  const MultiFiltration plain(built.space(), built.box().upper(), built.partitions());
  CHECK_FALSE(plain.f4_certified());
  const auto certified = certify_f4(plain);
  CHECK(certified.f4_certified());
  CHECK(certified == plain);
  CHECK_THROWS_AS(certify_f4(entangled()), StructuralError);
}

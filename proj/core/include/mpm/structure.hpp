#pragma once

#include <cstddef>

#include "mpm/filtration.hpp"

namespace mpm {

struct F4Report {
  /// max |E[E[1_w | F_a] | F_b] - E[1_w | F_{a∧b}]| over a, b and outcomes.
  double max_residual = 0.0;
  MultiIndex worst_a;
  MultiIndex worst_b;
  std::size_t pairs_checked = 0;
  bool pass = true;
};

/// Exhaustive check of the commutation condition
///   E[E[f | F_a] | F_b] = E[f | F_{a∧b}]
/// on the indicator basis, for every pair a, b in the box.
///
/// Comparable pairs reduce to the tower property, which the refinement
/// invariant of MultiFiltration already guarantees, so only incomparable
/// pairs are evaluated. Each evaluation works on atom intersections: for
/// w in atom A of F_a and y in atom B of F_b the residual equals
///   P(w) * | P(A∩B) / (P(A) P(B)) - [C(A) = C(B)] / P(C) |
/// where C is the atom of F_{a∧b}.
F4Report check_f4(const MultiFiltration& filtration, double tol = 1e-12);

/// Marks a filtration as satisfying F4 after an exhaustive check, so that
/// later operations needing F4 do not repeat it. Throws StructuralError
/// naming the worst pair when the check fails.
MultiFiltration certify_f4(MultiFiltration filtration, double tol = 1e-12);

/// Least R with a_{N_i(m)} <= R a_m for every positive martingale: the
/// largest mass ratio P(A)/P(B) over single steps m -> N_i(m) and nested
/// atoms B ⊆ A. Throws StructuralError if a step does not refine.
double regularity_constant(const MultiFiltration& filtration);

}  // namespace mpm

#include "mpm/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpm/errors.hpp"

namespace mpm {

namespace {

struct PairResidual {
  double forward = 0.0;   // (a, b)
  double backward = 0.0;  // (b, a)
};

// Residuals of both orderings of an incomparable pair.
PairResidual pair_residual(const Partition& pa, const Partition& pb, const Partition& pc,
                           const SampleSpace& space, const Partition::Atoms& atoms_a,
                           std::vector<double>& scratch, std::vector<std::size_t>& touched) {
  const auto mass_a = pa.atom_masses(space);
  const auto mass_b = pb.atom_masses(space);
  const auto mass_c = pc.atom_masses(space);

  std::vector<double> maxw_a(pa.atom_count(), 0.0);
  std::vector<double> maxw_b(pb.atom_count(), 0.0);
  std::vector<std::size_t> atoms_a_in_c(pc.atom_count(), 0);
  std::vector<std::size_t> atoms_b_in_c(pc.atom_count(), 0);
  std::vector<std::uint32_t> c_of_a(pa.atom_count());
  std::vector<std::uint32_t> c_of_b(pb.atom_count());
  {
    std::vector<bool> seen_a(pa.atom_count(), false), seen_b(pb.atom_count(), false);
    for (std::size_t w = 0; w < space.size(); ++w) {
      const auto a = pa.atom_of(w), b = pb.atom_of(w), c = pc.atom_of(w);
      maxw_a[a] = std::max(maxw_a[a], space.weight(w));
      maxw_b[b] = std::max(maxw_b[b], space.weight(w));
      if (!seen_a[a]) {
        seen_a[a] = true;
        c_of_a[a] = c;
        ++atoms_a_in_c[c];
      }
      if (!seen_b[b]) {
        seen_b[b] = true;
        c_of_b[b] = c;
        ++atoms_b_in_c[c];
      }
    }
  }

  PairResidual out;
  std::vector<std::size_t> partners_of_b(pb.atom_count(), 0);
  for (std::size_t a = 0; a < pa.atom_count(); ++a) {
    touched.clear();
    for (auto w : atoms_a.members(a)) {
      const auto b = pb.atom_of(w);
      if (scratch[b] == 0.0) touched.push_back(b);
      scratch[b] += space.weight(w);
    }
    const double pc_a = mass_c[c_of_a[a]];
    for (auto b : touched) {
      // Intersecting atoms always share their F_{a∧b} atom.
      const double dev = std::abs(scratch[b] / (mass_a[a] * mass_b[b]) - 1.0 / pc_a);
      out.forward = std::max(out.forward, maxw_a[a] * dev);
      out.backward = std::max(out.backward, maxw_b[b] * dev);
      ++partners_of_b[b];
      scratch[b] = 0.0;
    }
    // Disjoint atoms inside the same F_{a∧b} atom contribute P(w)/P(C).
    if (touched.size() < atoms_b_in_c[c_of_a[a]]) {
      out.forward = std::max(out.forward, maxw_a[a] / pc_a);
    }
  }
  for (std::size_t b = 0; b < pb.atom_count(); ++b) {
    if (partners_of_b[b] < atoms_a_in_c[c_of_b[b]]) {
      out.backward = std::max(out.backward, maxw_b[b] / mass_c[c_of_b[b]]);
    }
  }
  return out;
}

}  // namespace

F4Report check_f4(const MultiFiltration& filtration, double tol) {
  const auto& box = filtration.box();
  const auto& space = filtration.space();
  F4Report report;
  report.worst_a = MultiIndex::zeros(box.dim());
  report.worst_b = MultiIndex::zeros(box.dim());

  std::vector<double> scratch;
  std::vector<std::size_t> touched;
  for (std::size_t la = 0; la < box.volume(); ++la) {
    const MultiIndex a = box.index(la);
    const auto& pa = filtration.at(la);
    const auto atoms_a = pa.atoms();
    for (std::size_t lb = la + 1; lb < box.volume(); ++lb) {
      const MultiIndex b = box.index(lb);
      report.pairs_checked += 2;
      if (leq(a, b) || leq(b, a)) continue;
      const auto& pb = filtration.at(lb);
      const auto& pc = filtration.at(meet_index(a, b));
      scratch.assign(pb.atom_count(), 0.0);
      const auto r = pair_residual(pa, pb, pc, space, atoms_a, scratch, touched);
      if (r.forward > report.max_residual) {
        report.max_residual = r.forward;
        report.worst_a = a;
        report.worst_b = b;
      }
      if (r.backward > report.max_residual) {
        report.max_residual = r.backward;
        report.worst_a = b;
        report.worst_b = a;
      }
    }
  }
  report.pairs_checked += box.volume();
  report.pass = report.max_residual <= tol;
  return report;
}

MultiFiltration certify_f4(MultiFiltration filtration, double tol) {
  if (filtration.f4_certified()) return filtration;
  const auto report = check_f4(filtration, tol);
  if (!report.pass) {
    throw StructuralError("F4 fails with residual " + std::to_string(report.max_residual) + " at pair (" +
                          report.worst_a.to_string() + "," + report.worst_b.to_string() + ")");
  }
  filtration.f4_certified_ = true;
  return filtration;
}

double regularity_constant(const MultiFiltration& filtration) {
  const auto& box = filtration.box();
  const auto& space = filtration.space();
  double r = 1.0;
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    const auto& coarse = filtration.at(lin);
    const auto coarse_mass = coarse.atom_masses(space);
    for (std::size_t axis = 0; axis < box.dim(); ++axis) {
      if (box.coord(lin, axis) == box.upper()[axis]) continue;
      const std::size_t next = lin + box.stride(axis);
      const auto& fine = filtration.at(next);
      if (!is_refinement(fine, coarse)) {
        throw StructuralError("partition at " + box.index(next).to_string() + " does not refine " +
                              box.index(lin).to_string());
      }
      const auto fine_mass = fine.atom_masses(space);
      std::vector<std::uint32_t> parent(fine.atom_count());
      for (std::size_t w = 0; w < space.size(); ++w) parent[fine.atom_of(w)] = coarse.atom_of(w);
      for (std::size_t b = 0; b < fine.atom_count(); ++b) {
        r = std::max(r, coarse_mass[parent[b]] / fine_mass[b]);
      }
    }
  }
  return r;
}

}  // namespace mpm

#include "mpm/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpm/errors.hpp"
#include "mpm/operators.hpp"
#include "mpm/structure.hpp"

namespace mpm {

bool within_budget(double lhs, double rhs, double constant) {
  return lhs <= constant * rhs * (1.0 + kRelativeSlack);
}

namespace {

void require_shared_filtration(const Martingale& f, const Martingale& a, const char* where) {
  if (f.filtration_ptr() != a.filtration_ptr() && !(f.filtration() == a.filtration())) {
    throw ConfigError(std::string(where) + ": f and a live on different filtrations");
  }
}

void require_f4(const MultiFiltration& filtration, const char* where) {
  if (filtration.f4_certified()) return;
  const auto report = check_f4(filtration, 1e-12);
  if (!report.pass) {
    throw StructuralError(std::string(where) + " needs F4; residual " + std::to_string(report.max_residual) +
                          " at " + report.worst_a.to_string() + ", " + report.worst_b.to_string());
  }
}

double expectation_of_product(const SampleSpace& space, std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t w = 0; w < x.size(); ++w) acc += space.weight(w) * x[w] * x[w] * y[w] * y[w];
  return acc;
}

bool all_at_least_one(const MultiIndex& m) {
  return std::all_of(m.coords().begin(), m.coords().end(), [](int c) { return c >= 1; });
}

}  // namespace

TheoremSidesReport theorem_a_check(const Martingale& f, const Martingale& a, std::optional<int> horizon,
                                   double constant) {
  require_shared_filtration(f, a, "theorem_a_check");
  const auto& filtration = f.filtration();
  if (filtration.dim() != 1) throw ConfigError("theorem_a_check needs a one-parameter filtration");
  const int top = filtration.box().upper()[0];
  const int M = horizon.value_or(top);
  if (M < 1 || M > top) {
    throw ConfigError("theorem_a_check: horizon " + std::to_string(M) + " outside [1, " + std::to_string(top) + "]");
  }
  const auto& space = filtration.space();
  const std::size_t s = space.size();

  std::vector<double> lhs(s, 0.0), rhs(s, 0.0);
  for (int m = 1; m <= M; ++m) {
    const auto fm = f.at(m), fp = f.at(m - 1), am = a.at(m), ap = a.at(m - 1);
    for (std::size_t w = 0; w < s; ++w) {
      const double df = fm[w] - fp[w];
      const double da = am[w] - ap[w];
      lhs[w] += df * df * ap[w] * ap[w];
      rhs[w] += (fm[w] * fm[w] + fp[w] * fp[w]) * da * da;
    }
  }
  {
    const auto fM = f.at(M), aM = a.at(M);
    for (std::size_t w = 0; w < s; ++w) rhs[w] += fM[w] * fM[w] * aM[w] * aM[w];
  }

  const auto& root = filtration.at(0);
  const auto mass = root.atom_masses(space);
  TheoremSidesReport report;
  report.constant = constant;
  report.lhs_per_atom.assign(root.atom_count(), 0.0);
  report.rhs_per_atom.assign(root.atom_count(), 0.0);
  for (std::size_t w = 0; w < s; ++w) {
    report.lhs_per_atom[root.atom_of(w)] += space.weight(w) * lhs[w];
    report.rhs_per_atom[root.atom_of(w)] += space.weight(w) * rhs[w];
  }
  for (std::size_t atom = 0; atom < root.atom_count(); ++atom) {
    report.lhs_per_atom[atom] /= mass[atom];
    report.rhs_per_atom[atom] /= mass[atom];
    const double l = report.lhs_per_atom[atom], r = report.rhs_per_atom[atom];
    if (r > 0.0) report.max_ratio = std::max(report.max_ratio, l / r);
    if (!within_budget(l, r, constant)) report.pass = false;
  }
  return report;
}

TheoremSidesReport theorem_b_check(const Martingale& f, const Martingale& a, std::optional<MultiIndex> horizon,
                                   double budget) {
  require_shared_filtration(f, a, "theorem_b_check");
  const auto& filtration = f.filtration();
  require_f4(filtration, "theorem_b_check");
  const auto& box = filtration.box();
  const MultiIndex M = horizon.value_or(box.upper());
  if (!box.contains(M)) throw ShapeError("theorem_b_check: horizon " + M.to_string() + " outside the box");
  const std::size_t k = box.dim();
  const auto& space = filtration.space();

  TheoremSidesReport report;
  report.constant = budget;
  double lhs = 0.0, rhs = 0.0;

  if (all_at_least_one(M)) {
    const auto full = AxisSet::all(k);
    const auto df = diff(f.family(), full);
    const auto ba = shift(a.family(), full);
    for (std::size_t lin = 0; lin < box.volume(); ++lin) {
      if (box.on_lower_boundary(lin) || !leq(box.index(lin), M)) continue;
      lhs += expectation_of_product(space, df.at(lin), ba.at(lin));
    }

    const auto fstar = stopped_maximal(f.family());
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      const auto axes = AxisSet::from_mask(mask);
      const auto da = diff(a.family(), axes);
      double term = 0.0;
      for (const auto& m : boundary_slice(M, axes)) {
        const auto lin = box.linear(m);
        term += expectation_of_product(space, fstar.at(lin), da.at(lin));
      }
      report.decomposition.emplace_back(axes, term);
      rhs += term;
    }
  } else {
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) report.decomposition.emplace_back(AxisSet::from_mask(mask), 0.0);
  }

  report.lhs_per_atom = {lhs};
  report.rhs_per_atom = {rhs};
  report.max_ratio = rhs > 0.0 ? lhs / rhs : 0.0;
  report.pass = within_budget(lhs, rhs, budget);
  return report;
}

Enlargement enlargement(const OutcomeSet& event, const MultiFiltration& filtration) {
  return enlargement(event, filtration, regularity_constant(filtration));
}

Enlargement enlargement(const OutcomeSet& event, const MultiFiltration& filtration, double regularity) {
  const auto& space = filtration.space();
  if (event.size() != space.size()) throw ShapeError("enlargement: event has wrong number of outcomes");
  const auto k = static_cast<double>(filtration.dim());
  Enlargement out;
  out.threshold = std::pow(regularity, -k - 1.0);

  std::vector<double> indicator(space.size());
  for (std::size_t w = 0; w < space.size(); ++w) indicator[w] = event[w] ? 1.0 : 0.0;
  std::vector<double> maximal(space.size(), 0.0);
  for (std::size_t lin = 0; lin < filtration.box().volume(); ++lin) {
    const auto g = condexp(indicator, filtration.at(lin), space);
    for (std::size_t w = 0; w < g.size(); ++w) maximal[w] = std::max(maximal[w], g[w]);
  }
  out.set.assign(space.size(), false);
  for (std::size_t w = 0; w < space.size(); ++w) out.set[w] = maximal[w] > out.threshold;
  out.probability = space.probability(out.set);
  return out;
}

double stopping_lower_bound(double regularity, std::size_t k) {
  return 1.0 - std::pow(regularity, -static_cast<double>(k) - 1.0);
}

BrossardCertificate brossard_certificate(const Martingale& f, double lambda, const BrossardOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be positive and finite");
  const auto& filtration = f.filtration();
  require_f4(filtration, "brossard_certificate");
  const double sup = f.family().sup_norm();
  if (!is_boundary_reduced(f.family(), 1e-9 * std::max(1.0, sup))) {
    throw InputError("brossard_certificate needs a boundary-reduced martingale (apply boundary_reduce)");
  }

  const auto& box = filtration.box();
  const auto& space = filtration.space();
  const std::size_t k = box.dim();
  const std::size_t s = space.size();

  BrossardCertificate cert;
  cert.lambda = lambda;
  cert.regularity = regularity_constant(filtration);
  cert.tau = options.stopping_lower_bound.value_or(stopping_lower_bound(cert.regularity, k));

  const auto fstar = stopped_maximal(f.family());
  const auto global = fstar.terminal();
  cert.e_set.assign(s, false);
  for (std::size_t w = 0; w < s; ++w) cert.e_set[w] = global[w] > lambda;
  const auto enl = enlargement(cert.e_set, filtration, cert.regularity);
  const auto enl2 = enlargement(enl.set, filtration, cert.regularity);
  cert.enl_e = enl.set;
  cert.enl2_e = enl2.set;
  cert.p_e = space.probability(cert.e_set);
  cert.p_enl_e = enl.probability;
  cert.p_enl2_e = enl2.probability;

  std::vector<double> outside(s);
  for (std::size_t w = 0; w < s; ++w) outside[w] = cert.enl_e[w] ? 0.0 : 1.0;
  const auto a = martingale_from_terminal(outside, f.filtration_ptr());

  // (i) every difference of a vanishes where the stopped maximal exceeds lambda.
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    const auto da = diff(a.family(), AxisSet::from_mask(mask));
    for (std::size_t lin = 0; lin < box.volume(); ++lin) {
      if (box.on_lower_boundary(lin)) continue;
      const auto fs = fstar.at(lin);
      const auto d = da.at(lin);
      for (std::size_t w = 0; w < s; ++w) {
        if (fs[w] > lambda) cert.stopping_vanish_residual = std::max(cert.stopping_vanish_residual, std::abs(d[w]));
      }
    }
  }

  // (ii) a_{m-1} off Enl^2(E).
  const auto ba = shift(a.family(), AxisSet::all(k));
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    if (box.on_lower_boundary(lin)) continue;
    const auto v = ba.at(lin);
    for (std::size_t w = 0; w < s; ++w) {
      if (!cert.enl2_e[w]) cert.lower_bound_on_a = std::min(cert.lower_bound_on_a, v[w]);
    }
  }

  // (iii), (iv)
  const auto sf = square_function(f.family());
  double tail = 0.0;
  for (std::size_t w = 0; w < s; ++w) {
    if (sf[w] > lambda) cert.dist_lhs += space.weight(w);
    if (!cert.e_set[w]) tail += space.weight(w) * global[w] * global[w];
  }
  cert.dist_rhs_terms = {cert.p_e, tail / (lambda * lambda)};
  const double denom = cert.dist_rhs_terms[0] + cert.dist_rhs_terms[1];
  cert.dist_ratio = denom > 0.0 ? cert.dist_lhs / denom : 0.0;

  // The chain of estimates, each evaluated on both sides.
  const auto df = diff(f.family(), AxisSet::all(k));
  double energy_outside = 0.0;  // ∫_{F^c} Σ_{m>=1} (Δf_m)^2 with F = Enl^2(E)
  double weighted = 0.0;        // ∫ Σ_{m>=1} (Δf_m)^2 a_{m-1}^2
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    if (box.on_lower_boundary(lin)) continue;
    const auto d = df.at(lin);
    const auto b = ba.at(lin);
    for (std::size_t w = 0; w < s; ++w) {
      const double sq = d[w] * d[w];
      if (!cert.enl2_e[w]) energy_outside += space.weight(w) * sq;
      weighted += space.weight(w) * sq * b[w] * b[w];
    }
  }
  const double inv_l2 = 1.0 / (lambda * lambda);
  cert.chain.push_back({"chebyshev", cert.dist_lhs, cert.p_enl2_e + inv_l2 * energy_outside, true});
  cert.chain.push_back({"stopping_lower_bound", energy_outside,
                        cert.tau > 0.0 ? weighted / (cert.tau * cert.tau) : std::numeric_limits<double>::infinity(),
                        true});

  const auto sides = theorem_b_check(f, a, std::nullopt, options.theorem_b_budget.value_or(1.0));
  double rhs_full = 0.0, rhs_partial = 0.0, terminal_term = 0.0;
  for (const auto& [axes, term] : sides.decomposition) {
    rhs_full += term;
    if (axes.empty()) {
      terminal_term = term;
    } else {
      rhs_partial += term;
    }
  }
  if (options.theorem_b_budget) {
    cert.chain.push_back({"theorem_b", weighted, *options.theorem_b_budget * rhs_full, true});
  }

  double capped = 0.0;
  double isometry_worst = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    const auto axes = AxisSet::from_mask(mask);
    const auto da = diff(a.family(), axes);
    double energy = 0.0;
    for (const auto& m : boundary_slice(box.upper(), axes)) {
      const auto d = da.at(box.linear(m));
      for (std::size_t w = 0; w < s; ++w) energy += space.weight(w) * d[w] * d[w];
    }
    capped += energy;
    isometry_worst = std::max(isometry_worst, energy);
  }
  cert.chain.push_back({"vanishing_cap", rhs_partial, lambda * lambda * capped, true});
  cert.chain.push_back({"terminal_term", terminal_term, tail, true});
  cert.chain.push_back({"isometry", isometry_worst, cert.p_enl_e, true});

  bool chain_ok = true;
  for (auto& step : cert.chain) {
    step.holds = within_budget(step.lhs, step.rhs, 1.0);
    chain_ok = chain_ok && step.holds;
  }
  // Off Enl^2(E) the bound can hold with equality; allow for rounding in the
  // two conditional expectations being compared.
  cert.pass = cert.stopping_vanish_residual == 0.0 && cert.lower_bound_on_a >= cert.tau - 1e-12 && chain_ok;
  return cert;
}

PNormComparison pnorm_comparison(const Martingale& f, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InputError("p must be positive and finite");
  const double sup = f.family().sup_norm();
  if (!is_boundary_reduced(f.family(), 1e-9 * std::max(1.0, sup))) {
    throw InputError("pnorm_comparison needs a boundary-reduced martingale (apply boundary_reduce)");
  }
  const auto& space = f.filtration().space();
  const auto sf = square_function(f.family());
  const auto fstar = stopped_maximal(f.family());
  const auto global = fstar.terminal();
  PNormComparison out;
  for (std::size_t w = 0; w < space.size(); ++w) {
    out.square_moment += space.weight(w) * std::pow(sf[w], p);
    out.maximal_moment += space.weight(w) * std::pow(global[w], p);
  }
  out.degenerate = out.maximal_moment == 0.0;
  out.ratio = out.degenerate ? 0.0 : out.square_moment / out.maximal_moment;
  return out;
}

}  // namespace mpm

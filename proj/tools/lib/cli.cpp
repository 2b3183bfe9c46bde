#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "campaign.hpp"
#include "filtration_spec.hpp"
#include "mpm/mpm.hpp"

namespace mpm::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kDefaultF4Tol = 1e-12;
constexpr double kDefaultIdentityTol = 1e-10;
constexpr double kIsometrySlack = 1e-9;

struct Report {
  Json header = Json::object();
  Json body = Json::object();
  /// One flat record per trial; the CSV table.
  std::vector<Json> rows;
  bool pass = true;
};

const std::pair<Command, const char*> kCommands[] = {
    {Command::GenFiltration, "gen-filtration"},
    {Command::CheckStructure, "check-structure"},
    {Command::VerifyIdentities, "verify-identities"},
    {Command::VerifyTheoremA, "verify-theorem-a"},
    {Command::VerifyTheoremB, "verify-theorem-b"},
    {Command::Brossard, "brossard"},
    {Command::PNorm, "pnorm"},
    {Command::Search, "search"},
};

template <class T>
const T& require(const std::optional<T>& value, const char* flag, Command command) {
  if (!value) throw ConfigError(std::string(flag) + " is required for " + command_name(command));
  return *value;
}

Json index_json(const MultiIndex& m) { return Json(m.coords()); }

Json axes_json(AxisSet axes) {
  Json out = Json::array();
  for (auto a : axes.axes()) out.push_back(a + 1);
  return out;
}

void flatten(const Json& value, const std::string& prefix, Json& into) {
  if (value.is_object()) {
    for (const auto& [key, v] : value.items()) flatten(v, prefix.empty() ? key : prefix + "." + key, into);
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) flatten(value[i], prefix + "." + std::to_string(i), into);
  } else {
    into[prefix] = value;
  }
}

std::string csv_cell(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::string render_csv(const Report& report, double wall) {
  std::ostringstream s;
  s << "# schema_version=" << report_schema_version() << "\n";
  for (const auto& [key, v] : report.header.items()) s << "# " << key << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  s << "# wall_time_seconds=" << Json(wall).dump() << "\n";
  s << "# pass=" << (report.pass ? "true" : "false") << "\n";
  std::vector<Json> flat;
  if (report.rows.empty()) {
    Json row = Json::object();
    flatten(report.body, "", row);
    flat.push_back(std::move(row));
  } else {
    for (const auto& r : report.rows) {
      Json row = Json::object();
      flatten(r, "", row);
      flat.push_back(std::move(row));
    }
  }
  bool first = true;
  for (const auto& [key, v] : flat.front().items()) {
    s << (first ? "" : ",") << key;
    first = false;
  }
  s << "\n";
  for (const auto& row : flat) {
    first = true;
    for (const auto& [key, v] : row.items()) {
      s << (first ? "" : ",") << csv_cell(v);
      first = false;
    }
    s << "\n";
  }
  return s.str();
}

std::string render_json(const Report& report, double wall) {
  Json doc;
  doc["schema_version"] = report_schema_version();
  doc["header"] = report.header;
  doc["wall_time_seconds"] = wall;
  Json body = report.body;
  body["pass"] = report.pass;
  doc["body"] = std::move(body);
  return doc.dump(2) + "\n";
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("--out: cannot write " + path.string());
    out << text;
    if (!out) throw ConfigError("--out: failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void describe_filtration(const FiltrationSource& source, Report& report) {
  const auto& F = *source.filtration;
  report.header["filtration"] = source.description;
  report.header["k"] = F.dim();
  report.header["box"] = index_json(F.box().upper());
  report.header["outcomes"] = F.outcomes();
}

void echo_seed_trials(std::uint64_t seed, std::size_t trials, Report& report) {
  report.header["seed"] = seed;
  report.header["trials"] = trials;
}

std::shared_ptr<const MultiFiltration> with_f4(const FiltrationSource& source) {
  return std::make_shared<const MultiFiltration>(certify_f4(*source.filtration));
}

Json sides_json(const TheoremSidesReport& r) {
  Json j;
  j["lhs"] = r.lhs_per_atom;
  j["rhs"] = r.rhs_per_atom;
  j["max_ratio"] = r.max_ratio;
  if (!r.decomposition.empty()) {
    Json d = Json::array();
    for (const auto& [axes, term] : r.decomposition) d.push_back({{"I", axes_json(axes)}, {"term", term}});
    j["decomposition"] = std::move(d);
  }
  j["pass"] = r.pass;
  return j;
}

Report check_structure(const RunConfig& config, const FiltrationSource& source) {
  Report report;
  describe_filtration(source, report);
  const double tol = config.tol.value_or(kDefaultF4Tol);
  report.header["tol"] = tol;
  const auto f4 = check_f4(*source.filtration, tol);
  report.body["f4"] = {{"max_residual", f4.max_residual},
                       {"worst_a", index_json(f4.worst_a)},
                       {"worst_b", index_json(f4.worst_b)},
                       {"pairs_checked", f4.pairs_checked},
                       {"pass", f4.pass}};
  report.body["regularity"] = regularity_constant(*source.filtration);
  report.pass = f4.pass;
  return report;
}

Report verify_identities(const RunConfig& config, const FiltrationSource& source) {
  const auto seed = require(config.seed, "--seed", config.command);
  const auto trials = require(config.trials, "--trials", config.command);
  Report report;
  describe_filtration(source, report);
  echo_seed_trials(seed, trials, report);
  const double tol = config.tol.value_or(kDefaultIdentityTol);
  report.header["tol"] = tol;

  const auto results = campaign::identities(source.filtration, trials, seed, config.threads);
  CalculusResiduals worst;
  worst.variance_identity = 0.0;
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& r = results[t].residuals;
    worst.product_rule = std::max(worst.product_rule, r.product_rule);
    worst.summation_by_parts = std::max(worst.summation_by_parts, r.summation_by_parts);
    worst.shift_multiplicative = std::max(worst.shift_multiplicative, r.shift_multiplicative);
    worst.square_difference = std::max(worst.square_difference, r.square_difference);
    worst.variance_identity = std::max(*worst.variance_identity, r.variance_identity.value_or(0.0));
    const bool ok = r.max() <= tol;
    report.pass = report.pass && ok;
    report.rows.push_back({{"trial", t},
                           {"seed_f", results[t].seed_f},
                           {"seed_g", results[t].seed_g},
                           {"product_rule", r.product_rule},
                           {"summation_by_parts", r.summation_by_parts},
                           {"shift_multiplicative", r.shift_multiplicative},
                           {"square_difference", r.square_difference},
                           {"variance_identity", r.variance_identity.value_or(0.0)},
                           {"pass", ok}});
  }
  report.body["max_residuals"] = {{"product_rule", worst.product_rule},
                                  {"summation_by_parts", worst.summation_by_parts},
                                  {"shift_multiplicative", worst.shift_multiplicative},
                                  {"square_difference", worst.square_difference},
                                  {"variance_identity", *worst.variance_identity}};
  report.body["max_residual"] = worst.max();
  report.body["trials"] = report.rows;
  return report;
}

Report sides_report(const RunConfig& config, const FiltrationSource& source, double constant, bool theorem_b) {
  const auto seed = require(config.seed, "--seed", config.command);
  const auto trials = require(config.trials, "--trials", config.command);
  Report report;
  describe_filtration(source, report);
  echo_seed_trials(seed, trials, report);
  report.header[theorem_b ? "budget" : "constant"] = constant;

  const auto results = theorem_b ? campaign::theorem_b(with_f4(source), trials, seed, constant, config.threads)
                                 : campaign::theorem_a(source.filtration, trials, seed, constant, config.threads);
  double max_ratio = 0.0;
  std::size_t worst = 0;
  Json per_trial = Json::array();
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& r = results[t].report;
    if (r.max_ratio > max_ratio) {
      max_ratio = r.max_ratio;
      worst = t;
    }
    report.pass = report.pass && r.pass;
    Json j = sides_json(r);
    j["trial"] = t;
    j["seed_f"] = results[t].seed_f;
    j["seed_a"] = results[t].seed_a;
    per_trial.push_back(j);
    report.rows.push_back({{"trial", t},
                           {"seed_f", results[t].seed_f},
                           {"seed_a", results[t].seed_a},
                           {"max_ratio", r.max_ratio},
                           {"pass", r.pass}});
  }
  report.body["max_ratio"] = max_ratio;
  report.body["worst_trial"] = worst;
  report.body["trials"] = std::move(per_trial);
  return report;
}

Report verify_theorem_a(const RunConfig& config, const FiltrationSource& source) {
  if (source.filtration->dim() != 1) throw ConfigError("--filtration: verify-theorem-a needs k=1");
  return sides_report(config, source, config.constant.value_or(kTheoremAConstant), false);
}

Report verify_theorem_b(const RunConfig& config, const FiltrationSource& source) {
  const auto constants = BaselineConstants::load(require(config.constants, "--constants", config.command));
  const double budget = constants.theorem_b_budget(source.filtration->dim());
  return sides_report(config, source, budget, true);
}

Report brossard(const RunConfig& config, const FiltrationSource& source) {
  const auto seed = require(config.seed, "--seed", config.command);
  const auto trials = require(config.trials, "--trials", config.command);
  const auto constants = BaselineConstants::load(require(config.constants, "--constants", config.command));
  if (config.lambda.has_value() == config.lambda_quantile.has_value()) {
    throw ConfigError("--lambda / --lambda-quantile: give exactly one for brossard");
  }
  const auto F = with_f4(source);
  const std::size_t k = F->dim();
  const double R = regularity_constant(*F);
  BrossardOptions options;
  options.stopping_lower_bound = constants.stopping_lower_bound(k, R);
  try {
    options.theorem_b_budget = constants.theorem_b_budget(k);
  } catch (const ConfigError&) {
    // The weighted-sum step is then reported without a budget.
  }

  Report report;
  describe_filtration(source, report);
  echo_seed_trials(seed, trials, report);
  if (config.lambda) report.header["lambda"] = *config.lambda;
  if (config.lambda_quantile) report.header["lambda_quantile"] = *config.lambda_quantile;
  report.header["regularity"] = R;
  report.header["tau"] = *options.stopping_lower_bound;

  const auto results =
      campaign::brossard(F, trials, seed, {config.lambda, config.lambda_quantile}, options, config.threads);
  double c_bross = 0.0, min_lower = 1.0, max_vanish = 0.0;
  Json per_trial = Json::array();
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& c = results[t].certificate;
    c_bross = std::max(c_bross, c.dist_ratio);
    min_lower = std::min(min_lower, c.lower_bound_on_a);
    max_vanish = std::max(max_vanish, c.stopping_vanish_residual);
    report.pass = report.pass && c.pass;
    Json chain = Json::array();
    for (const auto& step : c.chain) {
      chain.push_back({{"step", step.name}, {"lhs", step.lhs}, {"rhs", step.rhs}, {"holds", step.holds}});
    }
    Json row = {{"trial", t},
                {"seed", results[t].seed},
                {"lambda", results[t].lambda},
                {"p_e", c.p_e},
                {"p_enl_e", c.p_enl_e},
                {"p_enl2_e", c.p_enl2_e},
                {"stopping_vanish_residual", c.stopping_vanish_residual},
                {"lower_bound_on_a", c.lower_bound_on_a},
                {"dist_lhs", c.dist_lhs},
                {"dist_rhs_terms", {c.dist_rhs_terms[0], c.dist_rhs_terms[1]}},
                {"dist_ratio", c.dist_ratio},
                {"pass", c.pass}};
    report.rows.push_back(row);
    row["chain"] = std::move(chain);
    per_trial.push_back(std::move(row));
  }
  report.body["c_bross"] = c_bross;
  report.body["min_lower_bound_on_a"] = min_lower;
  report.body["max_stopping_vanish_residual"] = max_vanish;
  report.body["trials"] = std::move(per_trial);
  return report;
}

Report pnorm(const RunConfig& config, const FiltrationSource& source) {
  const auto seed = require(config.seed, "--seed", config.command);
  const auto trials = require(config.trials, "--trials", config.command);
  const double p = require(config.p, "--p", config.command);
  if (!(p > 0.0)) throw ConfigError("--p must be positive");
  Report report;
  describe_filtration(source, report);
  echo_seed_trials(seed, trials, report);
  report.header["p"] = p;

  const auto results = campaign::pnorm(with_f4(source), p, trials, seed, config.threads);
  double max_ratio = 0.0;
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& c = results[t].comparison;
    bool ok = std::isfinite(c.ratio) && c.ratio > 0.0;
    if (p == 2.0) ok = ok && c.ratio <= 1.0 + kIsometrySlack;
    report.pass = report.pass && ok;
    max_ratio = std::max(max_ratio, c.ratio);
    report.rows.push_back({{"trial", t},
                           {"seed", results[t].seed},
                           {"square_moment", c.square_moment},
                           {"maximal_moment", c.maximal_moment},
                           {"ratio", c.ratio},
                           {"degenerate", c.degenerate},
                           {"pass", ok}});
  }
  report.body["max_ratio"] = max_ratio;
  report.body["trials"] = report.rows;
  return report;
}

Objective parse_objective(const RunConfig& config) {
  if (config.objective == "theorem_a") return Objective::theorem_a();
  if (config.objective == "theorem_b") return Objective::theorem_b();
  if (config.objective == "pnorm") return Objective::pnorm(require(config.p, "--p", config.command));
  throw ConfigError("--objective must be one of theorem_a, theorem_b, pnorm");
}

Report search(const RunConfig& config, const FiltrationSource& source) {
  const auto seed = require(config.seed, "--seed", config.command);
  const auto trials = require(config.trials, "--trials", config.command);
  const auto budget = require(config.budget, "--budget", config.command);
  const auto objective = parse_objective(config);

  // Proven bound the search must never beat, when one applies.
  std::optional<double> bound;
  switch (objective.kind) {
    case Objective::Kind::TheoremARatio:
      bound = kTheoremAConstant;
      break;
    case Objective::Kind::TheoremBRatio:
      if (config.constants) bound = BaselineConstants::load(*config.constants).theorem_b_budget(source.filtration->dim());
      break;
    case Objective::Kind::PNormRatio:
      if (objective.p == 2.0) bound = 1.0 + kIsometrySlack;
      break;
  }

  SearchOptions options;
  options.budget = budget;
  Report report;
  describe_filtration(source, report);
  echo_seed_trials(seed, trials, report);
  report.header["objective"] = objective.name();
  report.header["budget"] = budget;
  report.header["population"] = options.population;
  if (bound) report.header["bound"] = *bound;

  const auto F = objective.kind == Objective::Kind::TheoremARatio ? source.filtration : with_f4(source);
  const auto profile = constant_profile(F, objective, trials, seed, options, config.threads);
  for (std::size_t t = 0; t < trials; ++t) {
    const bool ok = !bound || profile.per_trial[t] <= *bound;
    report.pass = report.pass && ok;
    report.rows.push_back(
        {{"trial", t}, {"seed", profile.trial_seeds[t]}, {"best_value", profile.per_trial[t]}, {"pass", ok}});
  }
  report.body["max"] = profile.max;
  report.body["median"] = profile.median;
  report.body["trials"] = report.rows;
  if (trials > 0) {
    Json best;
    best["seed"] = profile.best.seed;
    best["best_value"] = profile.best.best_value;
    best["terminal"] = profile.best.best_terminal;
    if (objective.uses_weight()) best["weight_terminal"] = profile.best.best_weight_terminal;
    best["trace_length"] = profile.best.trace.size();
    report.body["best"] = std::move(best);
  }
  return report;
}

// --out names the filtration file here; the report goes to stdout.
Report gen_filtration(const RunConfig& config, const FiltrationSource& source) {
  const auto& path = require(config.out, "--out", config.command);
  Report report;
  describe_filtration(source, report);
  report.body["regularity"] = regularity_constant(*source.filtration);
  report.body["path"] = path.string();
  write_atomically(path, serialize_filtration(*source.filtration));
  report.pass = true;
  return report;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [command, text] : kCommands) {
    if (name == text) return command;
  }
  return std::nullopt;
}

std::string command_name(Command command) {
  for (const auto& [c, text] : kCommands) {
    if (c == command) return text;
  }
  return "unknown";
}

std::string report_schema_version() { return "1"; }

bool schema_compatible(std::string_view version) {
  const auto mine = report_schema_version();
  const auto major = version.substr(0, version.find('.'));
  return major == std::string_view(mine).substr(0, mine.find('.'));
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.filtration.empty()) throw ConfigError("--filtration is required");
    if (config.threads == 0) throw ConfigError("--threads must be positive");
    const auto start = std::chrono::steady_clock::now();
    const auto source = open_filtration(config.filtration);
    Report report;
    switch (config.command) {
      case Command::CheckStructure:
        report = check_structure(config, source);
        break;
      case Command::VerifyIdentities:
        report = verify_identities(config, source);
        break;
      case Command::VerifyTheoremA:
        report = verify_theorem_a(config, source);
        break;
      case Command::VerifyTheoremB:
        report = verify_theorem_b(config, source);
        break;
      case Command::Brossard:
        report = brossard(config, source);
        break;
      case Command::PNorm:
        report = pnorm(config, source);
        break;
      case Command::Search:
        report = search(config, source);
        break;
      case Command::GenFiltration:
        report = gen_filtration(config, source);
        break;
    }
    Json header;
    header["command"] = command_name(config.command);
    for (const auto& [key, v] : report.header.items()) header[key] = v;
    report.header = std::move(header);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto text = config.format == Format::Json ? render_json(report, wall) : render_csv(report, wall);
    if (config.out && config.command != Command::GenFiltration) {
      write_atomically(*config.out, text);
    } else {
      out << text;
    }
    if (!report.pass) err << "mpmcheck: " << command_name(config.command) << ": assertion failed\n";
    return report.pass ? kExitPass : kExitAssertion;
  } catch (const Error& e) {
    err << "mpmcheck: error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "mpmcheck: error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace mpm::cli

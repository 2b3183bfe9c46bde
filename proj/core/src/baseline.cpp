#include "mpm/baseline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mpm/errors.hpp"
#include "mpm/inequalities.hpp"
#include "mpm/structure.hpp"

namespace mpm {

namespace {

constexpr const char* kSchema = "mpm-baseline-constants";

bool regularity_matches(std::optional<double> a, std::optional<double> b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::abs(*a - *b) <= 1e-9;
}

}  // namespace

BaselineConstants BaselineConstants::parse(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("baseline constants: ") + e.what());
  }
  if (doc.value("schema", "") != kSchema) throw ConfigError("baseline constants: wrong schema tag");
  if (doc.value("version", 0) != kVersion) {
    throw ConfigError("baseline constants: unsupported version " + doc.value("version", nlohmann::json()).dump());
  }
  BaselineConstants out;
  try {
    for (const auto& item : doc.at("constants")) {
      BaselineEntry e;
      e.name = item.at("name").get<std::string>();
      e.k = item.at("k").get<std::size_t>();
      if (item.contains("R")) e.regularity = item.at("R").get<double>();
      e.value = item.at("value").get<double>();
      e.provenance = item.at("provenance").get<std::string>();
      out.set(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("baseline constants: ") + e.what());
  }
  return out;
}

BaselineConstants BaselineConstants::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open baseline constants " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string BaselineConstants::to_json() const {
  nlohmann::ordered_json doc;
  doc["schema"] = kSchema;
  doc["version"] = kVersion;
  auto list = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json item;
    item["name"] = e.name;
    item["k"] = e.k;
    if (e.regularity) item["R"] = *e.regularity;
    item["value"] = e.value;
    item["provenance"] = e.provenance;
    list.push_back(std::move(item));
  }
  doc["constants"] = std::move(list);
  return doc.dump(2) + "\n";
}

void BaselineConstants::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << to_json();
}

void BaselineConstants::set(BaselineEntry entry) {
  for (auto& e : entries_) {
    if (e.name == entry.name && e.k == entry.k && regularity_matches(e.regularity, entry.regularity)) {
      e = std::move(entry);
      return;
    }
  }
  entries_.push_back(std::move(entry));
}

const BaselineEntry* BaselineConstants::find(const std::string& name, std::size_t k,
                                             std::optional<double> regularity) const {
  for (const auto& e : entries_) {
    if (e.name == name && e.k == k && regularity_matches(e.regularity, regularity)) return &e;
  }
  return nullptr;
}

double BaselineConstants::theorem_b_budget(std::size_t k) const {
  if (const auto* e = find("theorem_b_budget", k, std::nullopt)) return e->value;
  throw ConfigError("baseline constants have no theorem_b_budget for k=" + std::to_string(k));
}

double BaselineConstants::enlargement_ratio(std::size_t k, double regularity) const {
  if (const auto* e = find("enlargement_ratio", k, regularity)) return e->value;
  throw ConfigError("baseline constants have no enlargement_ratio for k=" + std::to_string(k) +
                    ", R=" + std::to_string(regularity));
}

double BaselineConstants::stopping_lower_bound(std::size_t k, double regularity) const {
  if (const auto* e = find("stopping_lower_bound", k, regularity)) return e->value;
  throw ConfigError("baseline constants have no stopping_lower_bound for k=" + std::to_string(k) +
                    ", R=" + std::to_string(regularity));
}

double derive_theorem_b_budget(std::size_t k, double one_parameter_constant) {
  double c = 1.0;
  for (std::size_t j = 0; j < k; ++j) c *= 2.0 * one_parameter_constant;
  return c;
}

std::string theorem_b_budget_provenance(std::size_t k, double one_parameter_constant) {
  std::ostringstream s;
  s << "C(k) = 2*c*C(k-1), C(0) = 1, c = " << one_parameter_constant
    << " (one-parameter bound with f_m^2 + f_{m-1}^2 <= 2 (f*_m)^2; the induction over the last axis "
       "applies it once and bounds the pinned term and the two difference terms by the (k-1)-parameter "
       "case); k = "
    << k;
  return s.str();
}

EnlargementSurvey survey_enlargement(const MultiFiltration& filtration) {
  const auto& space = filtration.space();
  const std::size_t s = space.size();
  if (s > 20) throw CapacityError("survey_enlargement enumerates 2^S events; S = " + std::to_string(s));
  EnlargementSurvey out;
  out.regularity = regularity_constant(filtration);
  out.subsets = std::uint64_t{1} << s;
  OutcomeSet event(s);
  for (std::uint64_t bits = 1; bits < out.subsets; ++bits) {
    for (std::size_t w = 0; w < s; ++w) event[w] = (bits >> w) & 1u;
    const auto enl = enlargement(event, filtration, out.regularity);
    for (std::size_t w = 0; w < s; ++w) {
      if (event[w] && !enl.set[w]) out.always_contains = false;
    }
    const double ratio = enl.probability / space.probability(event);
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.worst_subset = bits;
    }
  }
  // The empty event maps to the empty set.
  return out;
}

}  // namespace mpm

#include "mpm/probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mpm/errors.hpp"

namespace mpm {

SampleSpace::SampleSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("sample space must have at least one outcome");
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      std::ostringstream msg;
      msg << "weight of outcome " << i << " is not strictly positive (" << weights_[i] << ")";
      throw ValidationError(msg.str());
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << total << ", expected 1";
    throw ValidationError(msg.str());
  }
}

SampleSpace SampleSpace::uniform(std::size_t size) {
  if (size == 0) throw ValidationError("sample space must have at least one outcome");
  return SampleSpace(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

double SampleSpace::expectation(std::span<const double> f) const {
  if (f.size() != size()) throw ShapeError("expectation: function has wrong number of outcomes");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += weights_[i] * f[i];
  return acc;
}

double SampleSpace::probability(const OutcomeSet& event) const {
  if (event.size() != size()) throw ShapeError("probability: event has wrong number of outcomes");
  double acc = 0.0;
  for (std::size_t i = 0; i < event.size(); ++i) {
    if (event[i]) acc += weights_[i];
  }
  return acc;
}

Partition::Partition(std::vector<std::uint32_t> labels) {
  if (labels.empty()) throw ValidationError("partition of an empty space");
  std::uint32_t max_label = 0;
  for (auto l : labels) max_label = std::max(max_label, l);
  if (max_label >= labels.size()) {
    throw ValidationError("atom id " + std::to_string(max_label) + " exceeds the number of outcomes");
  }
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> relabel(static_cast<std::size_t>(max_label) + 1, kUnset);
  std::uint32_t next = 0;
  for (auto& l : labels) {
    if (relabel[l] == kUnset) relabel[l] = next++;
    l = relabel[l];
  }
  if (next != static_cast<std::uint32_t>(max_label) + 1) {
    throw ValidationError("atom ids are not contiguous: " + std::to_string(next) + " distinct ids in 0.." +
                          std::to_string(max_label));
  }
  labels_ = std::move(labels);
  atom_count_ = next;
}

Partition Partition::trivial(std::size_t size) {
  return Partition(std::vector<std::uint32_t>(size, 0));
}

Partition Partition::discrete(std::size_t size) {
  std::vector<std::uint32_t> labels(size);
  for (std::size_t i = 0; i < size; ++i) labels[i] = static_cast<std::uint32_t>(i);
  return Partition(std::move(labels));
}

Partition::Atoms Partition::atoms() const {
  Atoms out;
  out.offsets.assign(atom_count_ + 1, 0);
  for (auto l : labels_) ++out.offsets[l + 1];
  for (std::size_t a = 0; a < atom_count_; ++a) out.offsets[a + 1] += out.offsets[a];
  out.outcomes.resize(labels_.size());
  std::vector<std::size_t> cursor(out.offsets.begin(), out.offsets.end() - 1);
  for (std::size_t i = 0; i < labels_.size(); ++i) out.outcomes[cursor[labels_[i]]++] = i;
  return out;
}

std::vector<double> Partition::atom_masses(const SampleSpace& space) const {
  if (space.size() != size()) throw ShapeError("partition and sample space sizes differ");
  std::vector<double> mass(atom_count_, 0.0);
  for (std::size_t i = 0; i < labels_.size(); ++i) mass[labels_[i]] += space.weight(i);
  return mass;
}

std::vector<double> condexp(std::span<const double> f, const Partition& partition,
                            const SampleSpace& space) {
  if (f.size() != space.size() || partition.size() != space.size()) {
    throw ShapeError("condexp: function has " + std::to_string(f.size()) + " entries, partition " +
                     std::to_string(partition.size()) + ", space " + std::to_string(space.size()));
  }
  const std::size_t atoms = partition.atom_count();
  std::vector<double> sum(atoms, 0.0);
  std::vector<double> mass(atoms, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto a = partition.atom_of(i);
    sum[a] += space.weight(i) * f[i];
    mass[a] += space.weight(i);
  }
  for (std::size_t a = 0; a < atoms; ++a) sum[a] /= mass[a];
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = sum[partition.atom_of(i)];
  return out;
}

bool is_refinement(const Partition& fine, const Partition& coarse) {
  if (fine.size() != coarse.size()) {
    throw ShapeError("is_refinement: partitions of " + std::to_string(fine.size()) + " and " +
                     std::to_string(coarse.size()) + " outcomes");
  }
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> parent(fine.atom_count(), kUnset);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    auto& p = parent[fine.atom_of(i)];
    if (p == kUnset) {
      p = coarse.atom_of(i);
    } else if (p != coarse.atom_of(i)) {
      return false;
    }
  }
  return true;
}

}  // namespace mpm

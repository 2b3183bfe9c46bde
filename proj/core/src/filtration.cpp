#include "mpm/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpm/errors.hpp"
#include "mpm/rng.hpp"

namespace mpm {

MultiFiltration::MultiFiltration(SampleSpace space, MultiIndex upper, std::vector<Partition> partitions)
    : space_(std::move(space)), box_(std::move(upper)), partitions_(std::move(partitions)) {
  if (partitions_.size() != box_.volume()) {
    throw ValidationError("filtration on box " + box_.upper().to_string() + " needs " +
                          std::to_string(box_.volume()) + " partitions, got " +
                          std::to_string(partitions_.size()));
  }
  for (std::size_t lin = 0; lin < partitions_.size(); ++lin) {
    if (partitions_[lin].size() != space_.size()) {
      throw ValidationError("partition at " + box_.index(lin).to_string() + " has " +
                            std::to_string(partitions_[lin].size()) + " outcomes, space has " +
                            std::to_string(space_.size()));
    }
  }
  for (std::size_t lin = 0; lin < partitions_.size(); ++lin) {
    for (std::size_t axis = 0; axis < dim(); ++axis) {
      if (box_.coord(lin, axis) == box_.upper()[axis]) continue;
      const std::size_t next = lin + box_.stride(axis);
      if (!is_refinement(partitions_[next], partitions_[lin])) {
        throw ValidationError("non-refining partitions at pair (" + box_.index(lin).to_string() + "," +
                              box_.index(next).to_string() + "): the second must refine the first");
      }
    }
  }
}

std::vector<Partition> MultiFiltration::axis_filtration(std::size_t axis) const {
  if (axis >= dim()) throw ShapeError("axis " + std::to_string(axis) + " out of range");
  std::vector<Partition> out;
  MultiIndex corner = box_.upper();
  std::vector<int> c = corner.coords();
  for (int j = 0; j <= box_.upper()[axis]; ++j) {
    c[axis] = j;
    out.push_back(at(MultiIndex(c)));
  }
  return out;
}

bool MultiFiltration::operator==(const MultiFiltration& other) const {
  return space_ == other.space_ && box_ == other.box_ && partitions_ == other.partitions_;
}

namespace {

void validate_depths(const std::vector<int>& depths) {
  if (depths.empty()) throw ShapeError("at least one axis is required");
  if (depths.size() > kMaxAxes) throw ShapeError("too many axes");
  for (int d : depths) {
    if (d < 1) throw ShapeError("axis depths must be positive");
  }
}

AxisTree dyadic_tree(int depth) {
  AxisTree tree;
  const std::size_t size = std::size_t{1} << depth;
  tree.weights.assign(size, 1.0 / static_cast<double>(size));
  for (int level = 0; level <= depth; ++level) {
    std::vector<std::uint32_t> labels(size);
    for (std::size_t x = 0; x < size; ++x) labels[x] = static_cast<std::uint32_t>(x >> (depth - level));
    tree.levels.push_back(std::move(labels));
  }
  return tree;
}

AxisTree random_tree(int depth, int max_children, double min_mass_ratio, Rng& rng, std::size_t max_outcomes) {
  struct Node {
    double mass;
    std::size_t parent;
  };
  // Largest split that can still give every child min_mass_ratio of the parent.
  const int feasible = static_cast<int>(std::floor(1.0 / min_mass_ratio + 1e-12));
  const int cap = std::max(1, std::min(max_children, feasible));

  std::vector<std::vector<Node>> levels{{Node{1.0, 0}}};
  for (int level = 0; level < depth; ++level) {
    std::vector<Node> next;
    const auto& current = levels.back();
    for (std::size_t p = 0; p < current.size(); ++p) {
      const int children = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cap)));
      std::vector<double> u(children);
      double total = 0.0;
      for (auto& x : u) {
        x = rng.uniform_open();
        total += x;
      }
      const double slack = 1.0 - children * min_mass_ratio;
      for (int c = 0; c < children; ++c) {
        const double share = children == 1 ? 1.0 : min_mass_ratio + slack * u[c] / total;
        next.push_back(Node{current[p].mass * share, p});
      }
      if (next.size() > max_outcomes) {
        throw CapacityError("random tree exceeds " + std::to_string(max_outcomes) + " outcomes");
      }
    }
    levels.push_back(std::move(next));
  }

  const auto& leaves = levels.back();
  AxisTree tree;
  double total = 0.0;
  for (const auto& leaf : leaves) total += leaf.mass;
  for (const auto& leaf : leaves) tree.weights.push_back(leaf.mass / total);

  tree.levels.assign(static_cast<std::size_t>(depth) + 1, std::vector<std::uint32_t>(leaves.size()));
  for (std::size_t x = 0; x < leaves.size(); ++x) {
    std::size_t node = x;
    for (int level = depth; level >= 0; --level) {
      tree.levels[static_cast<std::size_t>(level)][x] = static_cast<std::uint32_t>(node);
      if (level > 0) node = levels[static_cast<std::size_t>(level)][node].parent;
    }
  }
  return tree;
}

}  // namespace

MultiFiltration tensor_product(const std::vector<AxisTree>& axes, std::size_t max_outcomes) {
  if (axes.empty()) throw ShapeError("at least one axis is required");
  std::size_t size = 1;
  std::vector<int> upper;
  for (const auto& tree : axes) {
    if (tree.levels.empty()) throw ShapeError("axis tree without levels");
    for (const auto& level : tree.levels) {
      if (level.size() != tree.weights.size()) throw ShapeError("axis tree level has wrong size");
    }
    if (tree.weights.empty() || size > max_outcomes / tree.weights.size()) {
      throw CapacityError("product space exceeds " + std::to_string(max_outcomes) + " outcomes");
    }
    size *= tree.weights.size();
    upper.push_back(static_cast<int>(tree.depth()));
  }
  const std::size_t k = axes.size();

  // Per-axis factor coordinate of every outcome, first axis most significant.
  std::vector<std::vector<std::size_t>> factor(k, std::vector<std::size_t>(size));
  {
    std::size_t block = size;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t n = axes[i].weights.size();
      block /= n;
      for (std::size_t w = 0; w < size; ++w) factor[i][w] = (w / block) % n;
    }
  }

  std::vector<double> weights(size, 1.0);
  for (std::size_t w = 0; w < size; ++w) {
    for (std::size_t i = 0; i < k; ++i) weights[w] *= axes[i].weights[factor[i][w]];
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (auto& w : weights) w /= total;

  Box box{MultiIndex(upper)};
  std::vector<Partition> partitions;
  partitions.reserve(box.volume());
  std::vector<std::uint32_t> labels(size);
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    std::vector<std::size_t> radix(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& level = axes[i].levels[static_cast<std::size_t>(box.coord(lin, i))];
      radix[i] = static_cast<std::size_t>(*std::max_element(level.begin(), level.end())) + 1;
    }
    for (std::size_t w = 0; w < size; ++w) {
      std::size_t label = 0;
      for (std::size_t i = 0; i < k; ++i) {
        label = label * radix[i] + axes[i].levels[static_cast<std::size_t>(box.coord(lin, i))][factor[i][w]];
      }
      labels[w] = static_cast<std::uint32_t>(label);
    }
    // Every combination of factor atoms is non-empty, so labels are contiguous.
    partitions.emplace_back(labels);
  }

  MultiFiltration out(SampleSpace(std::move(weights)), MultiIndex(upper), std::move(partitions));
  out.f4_certified_ = true;
  return out;
}

MultiFiltration build_product_dyadic(const std::vector<int>& depths, std::size_t max_outcomes) {
  validate_depths(depths);
  int total_depth = 0;
  for (int d : depths) {
    total_depth += d;
    if (total_depth >= 63 || (std::size_t{1} << total_depth) > max_outcomes) {
      throw CapacityError("dyadic product needs 2^" + std::to_string(total_depth) +
                          " outcomes, cap is " + std::to_string(max_outcomes));
    }
  }
  std::vector<AxisTree> axes;
  for (int d : depths) axes.push_back(dyadic_tree(d));
  return tensor_product(axes, max_outcomes);
}

MultiFiltration build_product_random(const std::vector<int>& depths, int max_children, double min_mass_ratio,
                                     std::uint64_t seed, std::size_t max_outcomes) {
  validate_depths(depths);
  if (max_children < 2) throw InputError("max_children must be at least 2");
  if (!(min_mass_ratio > 0.0 && min_mass_ratio <= 1.0)) throw InputError("min_mass_ratio must lie in (0,1]");
  Rng rng(seed);
  std::vector<AxisTree> axes;
  for (int d : depths) axes.push_back(random_tree(d, max_children, min_mass_ratio, rng, max_outcomes));
  return tensor_product(axes, max_outcomes);
}

}  // namespace mpm

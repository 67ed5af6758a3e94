// Copyright 2026 The Hedonic Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>

#include "hedonic/error.hpp"
#include "hedonic/flow.hpp"

namespace hedonic {

FlowNetwork build_network(const MarketSpec& spec) {
  FlowNetwork net;
  net.num_producers = spec.num_producers();
  net.num_qualities = spec.num_qualities();
  net.num_consumers = spec.num_consumers();
  net.free_disposal = spec.free_disposal;
  net.roles.reserve(net.num_producers + net.num_qualities + net.num_consumers);
  for (std::size_t x = 0; x < net.num_producers; ++x) {
    net.roles.push_back(NodeRole::kSource);
    net.node_mass.push_back(-spec.n[x]);
  }
  for (std::size_t z = 0; z < net.num_qualities; ++z) {
    net.roles.push_back(NodeRole::kIntermediate);
    net.node_mass.push_back(0.0);
  }
  for (std::size_t y = 0; y < net.num_consumers; ++y) {
    net.roles.push_back(NodeRole::kTarget);
    net.node_mass.push_back(spec.m[y]);
  }
  for (std::size_t x = 0; x < net.num_producers; ++x) {
    for (std::size_t z = 0; z < net.num_qualities; ++z) {
      if (spec.alpha(x, z) == kNegInf) continue;
      net.arcs.push_back(
          {net.producer_node(x), net.quality_node(z), spec.alpha(x, z)});
    }
  }
  for (std::size_t z = 0; z < net.num_qualities; ++z) {
    for (std::size_t y = 0; y < net.num_consumers; ++y) {
      if (spec.gamma(z, y) == kNegInf) continue;
      net.arcs.push_back(
          {net.quality_node(z), net.consumer_node(y), spec.gamma(z, y)});
    }
  }
  return net;
}

std::vector<double> gradient(const FlowNetwork& net,
                             std::span<const double> potential) {
  if (potential.size() != net.num_nodes()) {
    throw HedonicError(ErrorCode::kDimensionMismatch,
                       "potential size does not match node count");
  }
  std::vector<double> grad(net.arcs.size());
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    grad[a] = potential[net.arcs[a].head] - potential[net.arcs[a].tail];
  }
  return grad;
}

std::vector<double> divergence(const FlowNetwork& net,
                               std::span<const double> flow) {
  if (flow.size() != net.arcs.size()) {
    throw HedonicError(ErrorCode::kDimensionMismatch,
                       "flow size does not match arc count");
  }
  std::vector<double> div(net.num_nodes(), 0.0);
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    div[net.arcs[a].head] += flow[a];
    div[net.arcs[a].tail] -= flow[a];
  }
  return div;
}

double dual_value(const FlowNetwork& net, std::span<const double> potential) {
  double total = 0.0;
  for (std::size_t w = 0; w < net.num_nodes(); ++w) {
    if (net.node_mass[w] != 0.0) total += potential[w] * net.node_mass[w];
  }
  return total;
}

namespace {

// Tolerances of the arithmetic path: zero for integers.
template <typename T>
struct Slack {
  T flow = 0;
  T cost = 0;
};

template <typename T>
T ConvertValue(double v) {
  if constexpr (std::is_integral_v<T>) {
    return static_cast<T>(std::llround(v));
  } else {
    return v;
  }
}

struct DualEdge {
  std::size_t from;
  std::size_t to;
  std::size_t weight_index;  // into the weight table of the solver
};

// Shortest path distances from `root` under difference constraints
// U_to - U_from <= w. Returns nullopt on a negative cycle.
template <typename T>
std::optional<std::vector<T>> BellmanFord(std::size_t num_nodes,
                                          std::size_t root,
                                          const std::vector<std::size_t>& from,
                                          const std::vector<std::size_t>& to,
                                          const std::vector<T>& weight,
                                          T eps) {
  const T kUnreached = std::numeric_limits<T>::max();
  std::vector<T> dist(num_nodes, kUnreached);
  dist[root] = 0;
  for (std::size_t round = 0; round <= num_nodes; ++round) {
    bool changed = false;
    for (std::size_t e = 0; e < from.size(); ++e) {
      if (dist[from[e]] == kUnreached) continue;
      const T candidate = dist[from[e]] + weight[e];
      if (dist[to[e]] == kUnreached || candidate < dist[to[e]] - eps) {
        dist[to[e]] = candidate;
        changed = true;
      }
    }
    if (!changed) return dist;
  }
  return std::nullopt;
}

template <typename T>
class SurplusFlowSolver {
 public:
  SurplusFlowSolver(const FlowNetwork& net, Slack<T> slack)
      : net_(net), slack_(slack) {
    const std::size_t nodes = net.num_nodes();
    source_ = nodes;
    sink_ = nodes + 1;
    T total_supply = 0;
    for (std::size_t x = 0; x < net.num_producers; ++x) {
      total_supply += ConvertValue<T>(-net.node_mass[x]);
    }
    const T unbounded = total_supply + 1;

    for (std::size_t x = 0; x < net.num_producers; ++x) {
      producer_arc_.push_back(AddArc(source_, net.producer_node(x),
                                     ConvertValue<T>(-net.node_mass[x]), 0));
    }
    for (const Arc& arc : net.arcs) {
      network_arc_.push_back(
          AddArc(arc.tail, arc.head, unbounded, -ConvertValue<T>(arc.surplus)));
    }
    for (std::size_t y = 0; y < net.num_consumers; ++y) {
      consumer_arc_.push_back(AddArc(net.consumer_node(y), sink_,
                                     ConvertValue<T>(net.node_mass[
                                         net.consumer_node(y)]),
                                     0));
    }
    if (net.free_disposal) {
      for (std::size_t z = 0; z < net.num_qualities; ++z) {
        disposal_arc_.push_back(
            AddArc(net.quality_node(z), sink_, unbounded, 0));
      }
    }
  }

  FlowSolution Solve() {
    FlowSolution solution;
    solution.exact_arithmetic = std::is_integral_v<T>;
    const std::size_t max_augmentations =
        64 * (arcs_.size() + 2) * (source_ + 2) + 1024;
    while (true) {
      auto path = LongestSurplusPath();
      if (!path) break;
      Augment(*path);
      if (++solution.augmentations > max_augmentations) {
        throw HedonicError(ErrorCode::kInternal,
                           "flow augmentation did not terminate");
      }
    }

    T welfare = 0;
    solution.flow.resize(net_.arcs.size());
    for (std::size_t a = 0; a < net_.arcs.size(); ++a) {
      const T f = Flow(network_arc_[a]);
      solution.flow[a] = static_cast<double>(f);
      welfare += f * ConvertValue<T>(net_.arcs[a].surplus);
    }
    solution.welfare = static_cast<double>(welfare);
    solution.disposal.assign(net_.num_qualities, 0.0);
    for (std::size_t z = 0; z < disposal_arc_.size(); ++z) {
      solution.disposal[z] = static_cast<double>(Flow(disposal_arc_[z]));
    }
    ExtremalPrices(solution);
    return solution;
  }

 private:
  struct ResidualArc {
    std::size_t tail;
    std::size_t head;
    T capacity;
    T cost;
  };

  // Forward arc at an even index, its reverse at the next odd index.
  std::size_t AddArc(std::size_t tail, std::size_t head, T capacity, T cost) {
    arcs_.push_back({tail, head, capacity, cost});
    arcs_.push_back({head, tail, 0, -cost});
    return arcs_.size() - 2;
  }

  T Flow(std::size_t forward) const { return arcs_[forward + 1].capacity; }

  bool Usable(const ResidualArc& arc) const {
    return arc.capacity > slack_.flow;
  }

  // Minimum-cost (maximum-surplus) source->sink path in the residual graph,
  // or nullopt when no path has strictly positive surplus. Arcs are relaxed
  // in insertion order with strict improvement, so ties go to the
  // first-indexed arc.
  std::optional<std::vector<std::size_t>> LongestSurplusPath() const {
    const std::size_t nodes = sink_ + 1;
    const T kUnreached = std::numeric_limits<T>::max();
    std::vector<T> dist(nodes, kUnreached);
    std::vector<std::size_t> pred(nodes, arcs_.size());
    dist[source_] = 0;
    for (std::size_t round = 0; round < nodes; ++round) {
      bool changed = false;
      for (std::size_t a = 0; a < arcs_.size(); ++a) {
        const ResidualArc& arc = arcs_[a];
        if (!Usable(arc) || dist[arc.tail] == kUnreached) continue;
        const T candidate = dist[arc.tail] + arc.cost;
        if (dist[arc.head] == kUnreached ||
            candidate < dist[arc.head] - slack_.cost) {
          dist[arc.head] = candidate;
          pred[arc.head] = a;
          changed = true;
        }
      }
      if (!changed) break;
    }
    if (dist[sink_] == kUnreached || dist[sink_] >= -slack_.cost) {
      return std::nullopt;
    }
    std::vector<std::size_t> path;
    for (std::size_t w = sink_; w != source_; w = arcs_[pred[w]].tail) {
      if (pred[w] == arcs_.size() || path.size() > arcs_.size()) {
        throw HedonicError(ErrorCode::kInternal,
                           "residual graph has a negative cycle");
      }
      path.push_back(pred[w]);
    }
    return path;
  }

  void Augment(const std::vector<std::size_t>& path) {
    T bottleneck = std::numeric_limits<T>::max();
    for (std::size_t a : path) bottleneck = std::min(bottleneck, arcs_[a].capacity);
    for (std::size_t a : path) {
      arcs_[a].capacity -= bottleneck;
      if (arcs_[a].capacity <= slack_.flow) arcs_[a].capacity = 0;
      arcs_[a ^ 1].capacity += bottleneck;
    }
  }

  // Lowest and highest optimal price per quality. Optimal duals are the
  // solutions of a system of difference constraints (dual feasibility plus
  // complementary slackness against the optimal flow), so the extreme
  // potentials are shortest path distances from and to the outside node.
  void ExtremalPrices(FlowSolution& solution) const {
    const std::size_t outside = 0;
    auto node = [](std::size_t w) { return w + 1; };
    std::vector<std::size_t> from;
    std::vector<std::size_t> to;
    std::vector<T> weight;
    auto constraint = [&](std::size_t i, std::size_t j, T w) {
      from.push_back(i);
      to.push_back(j);
      weight.push_back(w);
    };

    T box = 1;
    for (std::size_t a = 0; a < net_.arcs.size(); ++a) {
      const Arc& arc = net_.arcs[a];
      const T surplus = ConvertValue<T>(arc.surplus);
      box += surplus < 0 ? -surplus : surplus;
      // Dual feasibility: U_head - U_tail >= surplus.
      constraint(node(arc.head), node(arc.tail), -surplus);
      // Complementary slackness on arcs carrying flow.
      if (Flow(network_arc_[a]) > slack_.flow) {
        constraint(node(arc.tail), node(arc.head), surplus);
      }
    }
    for (std::size_t x = 0; x < net_.num_producers; ++x) {
      const std::size_t w = node(net_.producer_node(x));
      constraint(outside, w, 0);  // u_x >= 0
      if (arcs_[producer_arc_[x]].capacity > slack_.flow) {
        constraint(w, outside, 0);  // slack producers earn zero
      }
    }
    for (std::size_t y = 0; y < net_.num_consumers; ++y) {
      const std::size_t w = node(net_.consumer_node(y));
      constraint(w, outside, 0);  // v_y >= 0
      if (arcs_[consumer_arc_[y]].capacity > slack_.flow) {
        constraint(outside, w, 0);
      }
    }
    for (std::size_t z = 0; z < disposal_arc_.size(); ++z) {
      const std::size_t w = node(net_.quality_node(z));
      constraint(outside, w, 0);  // p_z >= 0 with free disposal
      if (Flow(disposal_arc_[z]) > slack_.flow) constraint(w, outside, 0);
    }
    const std::size_t nodes = net_.num_nodes() + 1;
    for (std::size_t w = 1; w < nodes; ++w) {
      constraint(outside, w, box);
      constraint(w, outside, box);
    }

    auto upper = BellmanFord<T>(nodes, outside, from, to, weight, slack_.cost);
    auto lower = BellmanFord<T>(nodes, outside, to, from, weight, slack_.cost);
    if (!upper || !lower) {
      throw HedonicError(ErrorCode::kDualInconsistency,
                         "no dual solution is complementary to the flow");
    }
    solution.price_low.resize(net_.num_qualities);
    solution.price_high.resize(net_.num_qualities);
    for (std::size_t z = 0; z < net_.num_qualities; ++z) {
      const std::size_t w = node(net_.quality_node(z));
      solution.price_low[z] = -static_cast<double>((*upper)[w]);
      solution.price_high[z] = static_cast<double>((*lower)[w]);
    }
  }

  const FlowNetwork& net_;
  Slack<T> slack_;
  std::size_t source_ = 0;
  std::size_t sink_ = 0;
  std::vector<ResidualArc> arcs_;
  std::vector<std::size_t> producer_arc_;
  std::vector<std::size_t> network_arc_;
  std::vector<std::size_t> consumer_arc_;
  std::vector<std::size_t> disposal_arc_;
};

// Integers up to 2^31 with a bounded total surplus keep every intermediate
// sum of the solver well inside int64.
bool FitsIntegerPath(const FlowNetwork& net) {
  constexpr double kLimit = 2147483648.0;
  double total_mass = 0.0;
  double max_surplus = 0.0;
  for (double mass : net.node_mass) {
    if (std::floor(mass) != mass || std::abs(mass) > kLimit) return false;
    total_mass += std::abs(mass);
  }
  for (const Arc& arc : net.arcs) {
    if (std::floor(arc.surplus) != arc.surplus ||
        std::abs(arc.surplus) > kLimit) {
      return false;
    }
    max_surplus = std::max(max_surplus, std::abs(arc.surplus));
  }
  const double arcs = static_cast<double>(net.arcs.size()) + 1.0;
  return (total_mass + 1.0) * (max_surplus + 1.0) * arcs < 4.0e18;
}

// Potential U = (-u, -p, v) built from the envelope utilities at p.
std::vector<double> EnvelopePotential(const FlowNetwork& net,
                                      const Vector& p) {
  std::vector<double> potential(net.num_nodes(), 0.0);
  for (std::size_t z = 0; z < net.num_qualities; ++z) {
    potential[net.quality_node(z)] = -p[z];
  }
  for (const Arc& arc : net.arcs) {
    if (net.roles[arc.tail] == NodeRole::kSource) {
      const std::size_t z = arc.head - net.num_producers;
      potential[arc.tail] =
          std::min(potential[arc.tail], -(arc.surplus + p[z]));
    } else {
      const std::size_t z = arc.tail - net.num_producers;
      potential[arc.head] =
          std::max(potential[arc.head], arc.surplus - p[z]);
    }
  }
  return potential;
}

}  // namespace

FlowSolution solve_max_surplus_flow(const FlowNetwork& net) {
  FlowSolution solution;
  if (FitsIntegerPath(net)) {
    solution = SurplusFlowSolver<std::int64_t>(net, {}).Solve();
  } else {
    double mass_scale = 1.0;
    double surplus_scale = 1.0;
    for (double mass : net.node_mass) {
      mass_scale = std::max(mass_scale, std::abs(mass));
    }
    for (const Arc& arc : net.arcs) {
      surplus_scale = std::max(surplus_scale, std::abs(arc.surplus));
    }
    solution = SurplusFlowSolver<double>(
                   net, {1e-12 * mass_scale, 1e-12 * surplus_scale})
                   .Solve();
  }
  solution.potential = EnvelopePotential(net, solution.price_low);
  return solution;
}

EquilibriumOutcome extract_equilibrium(const MarketSpec& spec,
                                       const FlowNetwork& net,
                                       const FlowSolution& solution,
                                       double tol) {
  EquilibriumOutcome out;
  out.p = solution.price_low;
  out.mu = Allocation::Zero(spec);
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const Arc& arc = net.arcs[a];
    if (net.roles[arc.tail] == NodeRole::kSource) {
      out.mu.supply(arc.tail, arc.head - net.num_producers) = solution.flow[a];
    } else {
      out.mu.demand(arc.tail - net.num_producers,
                    arc.head - net.num_producers - net.num_qualities) =
          solution.flow[a];
    }
  }
  out.disposal = Eigen::Map<const Vector>(solution.disposal.data(),
                                          solution.disposal.size());
  out.uv = envelope_utilities(spec, out.p);
  out.extremes.consumer_optimal = out.uv;
  out.extremes.producer_optimal = envelope_utilities(spec, solution.price_high);
  out.welfare = solution.welfare;
  out.dual_value = spec.n.dot(out.uv.u) + spec.m.dot(out.uv.v);
  out.exact_arithmetic = solution.exact_arithmetic;
  out.augmentations = solution.augmentations;

  // Complementary slackness against the returned duals.
  double scale = 1.0;
  for (const Arc& arc : net.arcs) scale = std::max(scale, std::abs(arc.surplus));
  double mass_scale = 1.0;
  for (double v : spec.n) mass_scale = std::max(mass_scale, v);
  for (double v : spec.m) mass_scale = std::max(mass_scale, v);
  const double flow_tol = tol * mass_scale;
  const std::vector<double> grad = gradient(net, solution.potential);
  double residual = 0.0;
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    residual = std::max(residual, net.arcs[a].surplus - grad[a]);
    if (solution.flow[a] > flow_tol) {
      residual = std::max(residual, std::abs(grad[a] - net.arcs[a].surplus));
    }
  }
  const Vector out_x = out.mu.producer_optout(spec.n);
  const Vector out_y = out.mu.consumer_optout(spec.m);
  for (Eigen::Index x = 0; x < out_x.size(); ++x) {
    if (out_x[x] > flow_tol) residual = std::max(residual, out.uv.u[x]);
  }
  for (Eigen::Index y = 0; y < out_y.size(); ++y) {
    if (out_y[y] > flow_tol) residual = std::max(residual, out.uv.v[y]);
  }
  for (Eigen::Index z = 0; z < out.disposal.size(); ++z) {
    if (out.disposal[z] > flow_tol) residual = std::max(residual, std::abs(out.p[z]));
  }
  out.slackness_residual = residual;
  if (residual > tol * scale) {
    std::ostringstream os;
    os << "complementary slackness residual " << residual << " exceeds "
       << tol * scale;
    throw HedonicError(ErrorCode::kDualInconsistency, os.str());
  }
  return out;
}

EquilibriumOutcome solve_equilibrium(const MarketSpec& spec, double tol) {
  validate_market(spec);
  const FlowNetwork net = build_network(spec);
  const FlowSolution solution = solve_max_surplus_flow(net);
  return extract_equilibrium(spec, net, solution, tol);
}

}  // namespace hedonic

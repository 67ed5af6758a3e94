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

#ifndef HEDONIC_FLOW_HPP_
#define HEDONIC_FLOW_HPP_

// Maximum surplus flow on the tripartite producer -> quality -> consumer
// network. The optimal flow is an equilibrium allocation and the optimal
// node potentials carry the equilibrium prices and indirect utilities:
//   U_x = -u_x,  U_z = -p_z,  U_y = v_y.

#include <cstddef>
#include <span>
#include <vector>

#include "hedonic/market.hpp"

namespace hedonic {

enum class NodeRole { kSource, kIntermediate, kTarget };

struct Arc {
  std::size_t tail;
  std::size_t head;
  double surplus;
};

// Nodes are laid out as [producers | qualities | consumers]. Arcs are stored
// producer->quality first (x-major, then z) followed by quality->consumer
// (z-major, then y); forbidden pairs have no arc.
struct FlowNetwork {
  std::size_t num_producers = 0;
  std::size_t num_qualities = 0;
  std::size_t num_consumers = 0;
  std::vector<NodeRole> roles;
  std::vector<double> node_mass;  // N_x = -n_x, N_z = 0, N_y = m_y
  std::vector<Arc> arcs;
  bool free_disposal = false;

  std::size_t num_nodes() const { return roles.size(); }
  std::size_t producer_node(std::size_t x) const { return x; }
  std::size_t quality_node(std::size_t z) const { return num_producers + z; }
  std::size_t consumer_node(std::size_t y) const {
    return num_producers + num_qualities + y;
  }
};

FlowNetwork build_network(const MarketSpec& spec);

// (grad U)_{ww'} = U_{w'} - U_w, one entry per arc.
std::vector<double> gradient(const FlowNetwork& net,
                             std::span<const double> potential);

// (div mu)_w = inflow - outflow at w, one entry per node. Adjoint of gradient.
std::vector<double> divergence(const FlowNetwork& net,
                               std::span<const double> flow);

// sum_w U_w N_w.
double dual_value(const FlowNetwork& net, std::span<const double> potential);

struct FlowSolution {
  std::vector<double> flow;       // per arc
  std::vector<double> disposal;   // per quality; zero unless free disposal
  std::vector<double> potential;  // per node, sign convention above
  double welfare = 0.0;
  // Lowest and highest equilibrium price of each quality over all optimal
  // duals. Directions in which the dual is unbounded are capped by a finite
  // box wider than any optimal vertex.
  Vector price_low;
  Vector price_high;
  bool exact_arithmetic = false;
  std::size_t augmentations = 0;
};

// Successive longest-path augmentation from producers to consumers with a
// free total flow value: stops once no residual path carries positive
// surplus. Integral masses and surpluses run on 64-bit integers so that
// integrality and the optimal duals are exact.
FlowSolution solve_max_surplus_flow(const FlowNetwork& net);

struct ExtremalDuals {
  IndirectUtilities consumer_optimal;  // u^min, v^max
  IndirectUtilities producer_optimal;  // u^max, v^min
};

struct EquilibriumOutcome {
  PriceVector p;
  Allocation mu;
  IndirectUtilities uv;
  double welfare = 0.0;
  double dual_value = 0.0;
  double slackness_residual = 0.0;
  ExtremalDuals extremes;
  Vector disposal;
  bool exact_arithmetic = false;
  std::size_t augmentations = 0;
};

// Converts a flow solution into hedonic terms. Utilities are the envelope
// values at the returned prices. Throws kDualInconsistency when
// complementary slackness fails by more than tol.
EquilibriumOutcome extract_equilibrium(const MarketSpec& spec,
                                       const FlowNetwork& net,
                                       const FlowSolution& solution,
                                       double tol = kDefaultTolerance);

// build_network + solve_max_surplus_flow + extract_equilibrium.
EquilibriumOutcome solve_equilibrium(const MarketSpec& spec,
                                     double tol = kDefaultTolerance);

// Brute-force welfare over every partial matching of individual producers
// to individual consumers with pair surplus Phi_xy. Requires integral
// masses (kNonIntegralMasses) and a bounded search space (kTooLarge).
double assignment_oracle(const MarketSpec& spec);

}  // namespace hedonic

#endif  // HEDONIC_FLOW_HPP_

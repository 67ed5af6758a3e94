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

#include <doctest.h>

#include <random>

#include "hedonic/error.hpp"
#include "hedonic/flow.hpp"
#include "hedonic/market.hpp"
#include "test_support.hpp"

namespace hedonic {
namespace {

using testing::EmptySpec;

void CheckSolvedInstance(const MarketSpec& spec, const EquilibriumOutcome& eq) {
  const double scale = std::max(1.0, std::abs(eq.welfare));
  CHECK(std::abs(eq.welfare - eq.dual_value) <= 1e-9 * scale);
  CHECK(std::abs(eq.welfare - welfare(spec, eq.mu)) <= 1e-9 * scale);
  CHECK(verify_equilibrium(spec, eq.p, eq.mu, 1e-9).all_clear());
  CHECK((eq.uv.u.array() >= 0).all());
  CHECK((eq.uv.v.array() >= 0).all());
  const IndirectSurplus s = indirect_surplus_matrix(spec);
  for (Eigen::Index x = 0; x < s.phi.rows(); ++x) {
    for (Eigen::Index y = 0; y < s.phi.cols(); ++y) {
      CHECK(eq.uv.u[x] + eq.uv.v[y] >= s.phi(x, y) - 1e-9);
    }
  }
  const PriceBounds b = price_bounds(spec, eq.uv);
  CHECK(((eq.p - b.p_min).array() >= -1e-9).all());
  CHECK(((b.p_max - eq.p).array() >= -1e-9).all());
}

TEST_SUITE("flow") {

TEST_CASE("network of the worked example") {
  const FlowNetwork net = build_network(worked_example_market());
  CHECK(net.num_nodes() == 10);
  CHECK(net.arcs.size() == 21);
  CHECK(net.node_mass == std::vector<double>{-1, -1, -1, -1, 0, 0, 0, 1, 1, 1});
  CHECK(net.roles[0] == NodeRole::kSource);
  CHECK(net.roles[4] == NodeRole::kIntermediate);
  CHECK(net.roles[9] == NodeRole::kTarget);
  // Producer arcs first, x-major; then quality arcs, z-major.
  CHECK(net.arcs[0].tail == 0);
  CHECK(net.arcs[0].head == net.quality_node(0));
  CHECK(net.arcs[1].surplus == 5);
  CHECK(net.arcs[12].tail == net.quality_node(0));
  CHECK(net.arcs[12].head == net.consumer_node(0));
  CHECK(net.arcs[20].surplus == 6);
  for (const Arc& a : net.arcs) {
    for (const Arc& b : net.arcs) {
      CHECK_FALSE((a.tail == b.head && a.head == b.tail));
    }
  }
}

TEST_CASE("forbidden cells have no arcs") {
  MarketSpec spec = worked_example_market();
  spec.alpha(0, 0) = kNegInf;
  spec.gamma(2, 1) = kNegInf;
  const FlowNetwork net = build_network(spec);
  CHECK(net.arcs.size() == 19);
  for (const Arc& a : net.arcs) {
    CHECK_FALSE((a.tail == net.producer_node(0) && a.head == net.quality_node(0)));
    CHECK(std::isfinite(a.surplus));
  }
}

TEST_CASE("single cell network") {
  MarketSpec spec = EmptySpec(1, 1, 1);
  spec.n[0] = 2;
  spec.m[0] = 3;
  const FlowNetwork net = build_network(spec);
  CHECK(net.num_nodes() == 3);
  CHECK(net.arcs.size() == 2);
  CHECK(net.node_mass == std::vector<double>{-2, 0, 3});
}

TEST_CASE("gradient and divergence") {
  const MarketSpec one = EmptySpec(1, 1, 1);
  const FlowNetwork small = build_network(one);
  CHECK(gradient(small, std::vector<double>(3, 0.0)) == std::vector<double>{0, 0});
  CHECK(divergence(small, std::vector<double>{1, 1}) == std::vector<double>{-1, 0, 1});

  const FlowNetwork net = build_network(worked_example_market());
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> d(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> U(net.num_nodes()), mu(net.arcs.size());
    for (double& u : U) u = d(gen);
    for (double& f : mu) f = std::abs(d(gen));
    const auto g = gradient(net, U);
    const auto div = divergence(net, mu);
    double lhs = 0, rhs = 0;
    for (std::size_t a = 0; a < mu.size(); ++a) {
      CHECK(g[a] == U[net.arcs[a].head] - U[net.arcs[a].tail]);
      lhs += g[a] * mu[a];
    }
    for (std::size_t w = 0; w < U.size(); ++w) rhs += U[w] * div[w];
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("maximum surplus flow on the worked example") {
  const MarketSpec spec = worked_example_market();
  const FlowNetwork net = build_network(spec);
  const FlowSolution sol = solve_max_surplus_flow(net);
  CHECK(sol.exact_arithmetic);
  CHECK(sol.welfare == 31);
  CHECK(dual_value(net, sol.potential) == 31);

  // Units produced per quality.
  std::vector<double> produced(3, 0.0);
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    if (net.roles[net.arcs[a].tail] == NodeRole::kSource) {
      produced[net.arcs[a].head - net.quality_node(0)] += sol.flow[a];
    }
  }
  CHECK(produced == std::vector<double>{0, 1, 2});

  CHECK(sol.price_low == (Vector(3) << -7, -5, -4).finished());
  CHECK(sol.price_high == (Vector(3) << -4, -2, -4).finished());

  // Dual feasibility and complementary slackness on arcs.
  const auto g = gradient(net, sol.potential);
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    CHECK(g[a] >= net.arcs[a].surplus);
    if (sol.flow[a] > 0) CHECK(g[a] == net.arcs[a].surplus);
  }
}

TEST_CASE("opt-out dominates negative surplus") {
  MarketSpec spec = EmptySpec(2, 2, 2);
  spec.alpha.setConstant(-1);
  spec.gamma.setConstant(-0.5);
  const EquilibriumOutcome eq = solve_equilibrium(spec);
  CHECK(eq.welfare == 0);
  CHECK(eq.mu.supply.isZero());
  CHECK(eq.mu.demand.isZero());
  CheckSolvedInstance(spec, eq);
}

TEST_CASE("worked example equilibrium and extremal duals") {
  const MarketSpec spec = worked_example_market();
  const EquilibriumOutcome eq = solve_equilibrium(spec);
  CHECK(eq.welfare == 31);
  CHECK(eq.exact_arithmetic);
  CheckSolvedInstance(spec, eq);
  const auto& lo = eq.extremes.consumer_optimal;
  const auto& hi = eq.extremes.producer_optimal;
  CHECK(lo.u == (Vector(4) << 0, 0, 4, 0).finished());
  CHECK(lo.v == (Vector(3) << 8, 9, 10).finished());
  CHECK(hi.u == (Vector(4) << 3, 0, 4, 0).finished());
  CHECK(hi.v == (Vector(3) << 8, 6, 10).finished());
  CHECK(((eq.uv.u - lo.u).array() >= 0).all());
  CHECK(((hi.u - eq.uv.u).array() >= 0).all());
  const PriceBounds b = price_bounds(spec, {hi.u, lo.v});
  CHECK(b.p_min == (Vector(3) << -7, -5, -4).finished());
  CHECK(b.p_max == (Vector(3) << -4, -2, -4).finished());
  for (Eigen::Index z = 0; z < 3; ++z) {
    CHECK(eq.p[z] >= b.p_min[z]);
    CHECK(eq.p[z] <= b.p_max[z]);
  }
}

TEST_CASE("total indifference") {
  const MarketSpec spec = EmptySpec(1, 1, 1);
  const EquilibriumOutcome eq = solve_equilibrium(spec);
  CHECK(eq.welfare == 0);
  CHECK(eq.p[0] == 0);
  CHECK(eq.uv.u[0] == 0);
  CHECK(eq.uv.v[0] == 0);
  CheckSolvedInstance(spec, eq);
}

TEST_CASE("random integer instances match brute force and are integral") {
  std::mt19937_64 gen(2024);
  testing::IntegerInstanceOptions opts;
  opts.max_x = opts.max_y = opts.max_z = 3;
  for (int trial = 0; trial < 150; ++trial) {
    opts.forbidden_rate = trial % 3 == 0 ? 0.25 : 0.0;
    const MarketSpec spec = testing::RandomIntegerMarket(gen, opts);
    const EquilibriumOutcome eq = solve_equilibrium(spec);
    CAPTURE(trial);
    CHECK(eq.exact_arithmetic);
    CHECK(eq.welfare == testing::ConsumerMajorOracle(spec).Solve());
    CHECK(eq.welfare == assignment_oracle(spec));
    CHECK(eq.mu.supply.unaryExpr([](double v) { return double(testing::IsInteger(v)); }).minCoeff() == 1);
    CHECK(eq.mu.demand.unaryExpr([](double v) { return double(testing::IsInteger(v)); }).minCoeff() == 1);
    CheckSolvedInstance(spec, eq);
  }
}

TEST_CASE("real surpluses with integer masses") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 100; ++trial) {
    MarketSpec spec = testing::RandomRealMarket(gen, 4, 3, 4);
    for (Eigen::Index i = 0; i < spec.n.size(); ++i) spec.n[i] = std::round(spec.n[i]);
    for (Eigen::Index i = 0; i < spec.m.size(); ++i) spec.m[i] = std::round(spec.m[i]);
    const EquilibriumOutcome eq = solve_equilibrium(spec);
    CAPTURE(trial);
    CHECK_FALSE(eq.exact_arithmetic);
    CHECK(eq.welfare == doctest::Approx(testing::ConsumerMajorOracle(spec).Solve()).epsilon(1e-12));
    CHECK(eq.mu.supply.unaryExpr([](double v) { return double(testing::IsInteger(v)); }).minCoeff() == 1);
    CheckSolvedInstance(spec, eq);
  }
}

TEST_CASE("fractional masses") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    const MarketSpec spec = testing::RandomRealMarket(gen, 5, 4, 5);
    CAPTURE(trial);
    CheckSolvedInstance(spec, solve_equilibrium(spec));
  }
}

TEST_CASE("extreme prices are equilibrium prices and are tight") {
  // Positive masses everywhere, so no dual variable is left unpriced.
  std::mt19937_64 gen(31);
  testing::IntegerInstanceOptions opts;
  opts.min_mass = 1;
  for (int trial = 0; trial < 60; ++trial) {
    const MarketSpec spec = testing::RandomIntegerMarket(gen, opts);
    const FlowNetwork net = build_network(spec);
    const FlowSolution sol = solve_max_surplus_flow(net);
    const EquilibriumOutcome eq = extract_equilibrium(spec, net, sol);
    CAPTURE(trial);
    CHECK(verify_equilibrium(spec, sol.price_low, eq.mu).all_clear());
    CHECK(verify_equilibrium(spec, sol.price_high, eq.mu).all_clear());
    for (Eigen::Index z = 0; z < sol.price_low.size(); ++z) {
      PriceVector below = sol.price_low, above = sol.price_high;
      below[z] -= 1e-3;
      above[z] += 1e-3;
      CHECK_FALSE(verify_equilibrium(spec, below, eq.mu).all_clear());
      CHECK_FALSE(verify_equilibrium(spec, above, eq.mu).all_clear());
    }
  }
}

TEST_CASE("free disposal") {
  SUBCASE("producers supply goods nobody buys") {
    MarketSpec spec = EmptySpec(2, 1, 1);
    spec.alpha << 3, 1;
    spec.gamma << -1;
    spec.free_disposal = true;
    const EquilibriumOutcome eq = solve_equilibrium(spec);
    CHECK(eq.welfare == 4);
    CHECK(eq.p[0] == 0);
    CHECK(eq.disposal[0] == 2);
    CHECK(assignment_oracle(spec) == 4);
    CheckSolvedInstance(spec, eq);
    // Without disposal only the one buyer can absorb output.
    spec.free_disposal = false;
    CHECK(solve_equilibrium(spec).welfare == 2);
  }
  SUBCASE("random instances") {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 80; ++trial) {
      MarketSpec spec = testing::RandomIntegerMarket(gen);
      spec.free_disposal = true;
      const EquilibriumOutcome eq = solve_equilibrium(spec);
      CAPTURE(trial);
      CHECK(eq.welfare == assignment_oracle(spec));
      CHECK((eq.p.array() >= 0).all());
      CheckSolvedInstance(spec, eq);
    }
  }
}

TEST_CASE("solutions are deterministic") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const MarketSpec spec = testing::RandomRealMarket(gen, 5, 4, 5);
    const FlowSolution a = solve_max_surplus_flow(build_network(spec));
    const FlowSolution b = solve_max_surplus_flow(build_network(spec));
    CHECK(a.flow == b.flow);
    CHECK(a.potential == b.potential);
  }
}

TEST_CASE("assignment oracle") {
  CHECK(assignment_oracle(worked_example_market()) == 31);

  MarketSpec empty = EmptySpec(2, 2, 2);
  empty.n.setZero();
  empty.m.setZero();
  CHECK(assignment_oracle(empty) == 0);

  MarketSpec diag = EmptySpec(2, 2, 2);
  diag.alpha << 5, 0, 0, 5;
  diag.gamma << 5, 0, 0, 5;
  CHECK(assignment_oracle(diag) == 20);

  MarketSpec fractional = worked_example_market();
  fractional.n[0] = 0.5;
  try {
    assignment_oracle(fractional);
    FAIL("expected NonIntegralMasses");
  } catch (const HedonicError& e) {
    CHECK(e.code() == ErrorCode::kNonIntegralMasses);
  }

  MarketSpec huge = EmptySpec(4, 2, 6);
  huge.n.setConstant(40);
  huge.m.setConstant(40);
  try {
    assignment_oracle(huge);
    FAIL("expected TooLarge");
  } catch (const HedonicError& e) {
    CHECK(e.code() == ErrorCode::kTooLarge);
  }
}

}  // TEST_SUITE
}  // namespace
}  // namespace hedonic

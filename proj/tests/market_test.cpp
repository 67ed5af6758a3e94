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
#include "hedonic/market.hpp"
#include "test_support.hpp"

namespace hedonic {
namespace {

using testing::EmptySpec;

// x1 -> z2 -> y2, x2 and x3 -> z3 -> y1 and y3.
Allocation ExampleOptimum(const MarketSpec& spec) {
  Allocation mu = Allocation::Zero(spec);
  mu.supply(0, 1) = 1;
  mu.supply(1, 2) = 1;
  mu.supply(2, 2) = 1;
  mu.demand(1, 1) = 1;
  mu.demand(2, 0) = 1;
  mu.demand(2, 2) = 1;
  return mu;
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const HedonicError& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST_SUITE("market") {

TEST_CASE("worked example validates without warnings") {
  const MarketSpec spec = worked_example_market();
  CHECK(spec.num_producers() == 4);
  CHECK(spec.num_consumers() == 3);
  CHECK(spec.num_qualities() == 3);
  CHECK(validate_market(spec).empty());
  CHECK(spec.integral());
}

TEST_CASE("validation errors") {
  MarketSpec spec = worked_example_market();
  SUBCASE("negative mass") {
    spec.n[0] = -1;
    CHECK(CodeOf([&] { validate_market(spec); }) == ErrorCode::kNegativeMass);
  }
  SUBCASE("alpha shape") {
    spec.alpha = Table::Zero(3, 3);
    CHECK(CodeOf([&] { validate_market(spec); }) == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("gamma shape") {
    spec.gamma = Table::Zero(3, 4);
    CHECK(CodeOf([&] { validate_market(spec); }) == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("positive infinity") {
    spec.gamma(0, 0) = std::numeric_limits<double>::infinity();
    CHECK(CodeOf([&] { validate_market(spec); }) == ErrorCode::kInvalidSurplus);
  }
  SUBCASE("nan") {
    spec.alpha(1, 1) = std::nan("");
    CHECK(CodeOf([&] { validate_market(spec); }) == ErrorCode::kInvalidSurplus);
  }
  SUBCASE("duplicate labels") {
    spec.qualities[2] = spec.qualities[0];
    CHECK(CodeOf([&] { validate_market(spec); }) == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("empty type set") {
    MarketSpec empty = EmptySpec(1, 1, 1);
    empty.consumers.clear();
    empty.m.resize(0);
    empty.gamma.resize(1, 0);
    CHECK(CodeOf([&] { validate_market(empty); }) == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("all-infeasible rows are warnings") {
  MarketSpec spec = worked_example_market();
  spec.alpha.row(3).setConstant(kNegInf);
  spec.gamma.col(1).setConstant(kNegInf);
  const auto warnings = validate_market(spec);
  REQUIRE(warnings.size() == 2);
  CHECK(warnings[0].kind == MarketWarning::Kind::kAllInfeasibleProducer);
  CHECK(warnings[0].index == 3);
  CHECK(warnings[1].kind == MarketWarning::Kind::kAllInfeasibleConsumer);
  CHECK(warnings[1].index == 1);
}

TEST_CASE("integral flag") {
  MarketSpec spec = worked_example_market();
  CHECK(spec.integral());
  spec.m[2] = 0.5;
  CHECK_FALSE(spec.integral());
}

TEST_CASE("indirect surplus of the worked example") {
  const MarketSpec spec = worked_example_market();
  const IndirectSurplus s = indirect_surplus_matrix(spec);
  CHECK(s.phi(0, 0) == 7);
  CHECK(s.phi(0, 1) == 9);
  CHECK(s.phi(0, 2) == 9);
  for (Eigen::Index x = 0; x < 4; ++x) {
    for (Eigen::Index y = 0; y < 3; ++y) {
      CHECK(s.phi(x, y) == testing::PairSurplus(spec, x, y));
    }
  }
  // alpha row x1 + gamma column y1 = (2, 7, 7).
  CHECK(s.argmax[0][0] == std::vector<std::size_t>{1, 2});
}

TEST_CASE("indirect surplus edge cases") {
  SUBCASE("zero surplus ties everywhere") {
    const MarketSpec spec = EmptySpec(2, 3, 2);
    const IndirectSurplus s = indirect_surplus_matrix(spec);
    CHECK(s.phi.isZero());
    CHECK(s.argmax[1][1] == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("infeasible producer") {
    MarketSpec spec = worked_example_market();
    spec.alpha.row(2).setConstant(kNegInf);
    const IndirectSurplus s = indirect_surplus_matrix(spec);
    for (Eigen::Index y = 0; y < 3; ++y) {
      CHECK(s.phi(2, y) == kNegInf);
      CHECK(s.argmax[2][y].empty());
    }
  }
}

TEST_CASE("indirect surplus is monotone in alpha") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> bump(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    MarketSpec spec = testing::RandomRealMarket(gen, 4, 4, 4);
    const Table before = indirect_surplus_matrix(spec).phi;
    std::uniform_int_distribution<Eigen::Index> cell(0, spec.alpha.size() - 1);
    spec.alpha(cell(gen)) += bump(gen);
    const Table after = indirect_surplus_matrix(spec).phi;
    CHECK(((after - before).array() >= 0.0).all());
  }
}

TEST_CASE("welfare") {
  const MarketSpec spec = worked_example_market();
  CHECK(welfare(spec, ExampleOptimum(spec)) == 31);
  CHECK(testing::ConsumerMajorOracle(spec).Solve() == 31);
  CHECK(welfare(spec, Allocation::Zero(spec)) == 0);

  SUBCASE("mass on a forbidden cell") {
    MarketSpec forbidden = spec;
    forbidden.alpha(0, 1) = kNegInf;
    CHECK(CodeOf([&] { welfare(forbidden, ExampleOptimum(forbidden)); }) ==
          ErrorCode::kInfeasibleMass);
  }
  SUBCASE("people counting") {
    Allocation mu = ExampleOptimum(spec);
    mu.supply(0, 0) = 1;
    mu.demand(0, 1) = 1;
    CHECK(CodeOf([&] { welfare(spec, mu); }) == ErrorCode::kConstraintViolation);
  }
  SUBCASE("clearing") {
    Allocation mu = ExampleOptimum(spec);
    mu.supply(3, 2) = 1;
    CHECK(CodeOf([&] { welfare(spec, mu); }) == ErrorCode::kConstraintViolation);
    MarketSpec disposal = spec;
    disposal.free_disposal = true;
    CHECK(welfare(disposal, mu) == 35);
    mu.supply(3, 2) = 0;
    mu.supply(2, 2) = 0;
    CHECK(CodeOf([&] { welfare(disposal, mu); }) == ErrorCode::kConstraintViolation);
  }
  SUBCASE("negative entries") {
    Allocation mu = Allocation::Zero(spec);
    mu.supply(0, 0) = -1;
    mu.demand(0, 0) = -1;
    CHECK(CodeOf([&] { welfare(spec, mu); }) == ErrorCode::kConstraintViolation);
  }
}

TEST_CASE("verify_equilibrium on the worked example") {
  const MarketSpec spec = worked_example_market();
  const Allocation mu = ExampleOptimum(spec);

  PriceVector inside(3);
  inside << -4, -2, -4;
  const VerificationReport ok = verify_equilibrium(spec, inside, mu, 1e-9);
  CHECK(ok.all_clear());
  CHECK(ok.max_residual == 0);

  const VerificationReport bad =
      verify_equilibrium(spec, PriceVector::Zero(3), mu, 1e-9);
  CHECK(bad.people_counting_ok);
  CHECK(bad.market_clearing_ok);
  CHECK_FALSE(bad.rationality_violations.empty());
  CHECK_FALSE(bad.all_clear());
  // At p = 0 x4 sits out although 4 + p_1 = 4 > 0.
  bool x4_opt_out_flagged = false;
  for (const auto& v : bad.rationality_violations) {
    if (v.side == Side::kProducer && v.agent_type == 3 && !v.chosen) {
      x4_opt_out_flagged = true;
      CHECK(v.better == std::optional<std::size_t>(0));
      CHECK(v.slack == doctest::Approx(4.0));
    }
  }
  CHECK(x4_opt_out_flagged);
}

TEST_CASE("verify_equilibrium independent inequality oracle") {
  // Every price on a grid over [-8, -1]^3 is checked against a direct
  // evaluation of the rationality inequalities.
  const MarketSpec spec = worked_example_market();
  const Allocation mu = ExampleOptimum(spec);
  for (int a = -8; a <= -1; ++a) {
    for (int b = -8; b <= -1; ++b) {
      for (int c = -8; c <= -1; ++c) {
        PriceVector p(3);
        p << a, b, c;
        bool rational = true;
        for (int x = 0; x < 4; ++x) {
          double best = 0;
          for (int z = 0; z < 3; ++z) best = std::max(best, spec.alpha(x, z) + p[z]);
          double got = 0;
          for (int z = 0; z < 3; ++z) {
            if (mu.supply(x, z) > 0) got = spec.alpha(x, z) + p[z];
          }
          rational = rational && got >= best;
        }
        for (int y = 0; y < 3; ++y) {
          double best = 0;
          for (int z = 0; z < 3; ++z) best = std::max(best, spec.gamma(z, y) - p[z]);
          double got = 0;
          for (int z = 0; z < 3; ++z) {
            if (mu.demand(z, y) > 0) got = spec.gamma(z, y) - p[z];
          }
          rational = rational && got >= best;
        }
        const bool in_box = a >= -7 && a <= -4 && b >= -5 && b <= -2 && c == -4;
        CHECK(verify_equilibrium(spec, p, mu, 1e-9).all_clear() == rational);
        // The equilibrium set is a lattice inside the box, with the box
        // corners as its extreme points.
        if (rational) CHECK(in_box);
        if ((a == -7 && b == -5 && c == -4) || (a == -4 && b == -2 && c == -4)) {
          CHECK(rational);
        }
      }
    }
  }
}

TEST_CASE("verify_equilibrium corner cases") {
  SUBCASE("producer opt-out is rational at low prices") {
    const MarketSpec spec = EmptySpec(1, 1, 1);
    PriceVector p(1);
    p << -10;
    const auto report = verify_equilibrium(spec, p, Allocation::Zero(spec));
    // Consumers would gain 10 by buying, so only they are flagged.
    REQUIRE(report.rationality_violations.size() == 1);
    CHECK(report.rationality_violations[0].side == Side::kConsumer);
    CHECK(report.rationality_violations[0].slack == doctest::Approx(10.0));
  }
  SUBCASE("no trade with both sides priced out") {
    MarketSpec spec = EmptySpec(1, 1, 1);
    spec.alpha << -1;
    spec.gamma << -1;
    CHECK(verify_equilibrium(spec, PriceVector::Zero(1), Allocation::Zero(spec)).all_clear());
  }
  SUBCASE("profitable opt-out is flagged") {
    MarketSpec spec = EmptySpec(1, 1, 1);
    spec.alpha(0, 0) = 5;
    const auto report =
        verify_equilibrium(spec, PriceVector::Zero(1), Allocation::Zero(spec));
    REQUIRE(report.rationality_violations.size() == 1);
    CHECK_FALSE(report.rationality_violations[0].chosen.has_value());
  }
  SUBCASE("people counting and clearing residuals") {
    MarketSpec spec = EmptySpec(1, 1, 1);
    Allocation mu = Allocation::Zero(spec);
    mu.supply(0, 0) = 2;
    mu.demand(0, 0) = 1;
    const auto report = verify_equilibrium(spec, PriceVector::Zero(1), mu);
    CHECK_FALSE(report.people_counting_ok);
    CHECK_FALSE(report.market_clearing_ok);
    CHECK(report.max_residual == doctest::Approx(1.0));
  }
  SUBCASE("free disposal needs a zero price on disposed goods") {
    MarketSpec spec = EmptySpec(1, 1, 1);
    spec.free_disposal = true;
    Allocation mu = Allocation::Zero(spec);
    mu.supply(0, 0) = 1;
    PriceVector p(1);
    p << 0;
    CHECK(verify_equilibrium(spec, p, mu).all_clear());
    p << 0.5;
    CHECK_FALSE(verify_equilibrium(spec, p, mu).all_clear());
  }
}

TEST_CASE("price bounds") {
  const MarketSpec spec = worked_example_market();
  SUBCASE("worked example") {
    IndirectUtilities uv;
    uv.u = Vector(4);
    uv.u << 3, 0, 4, 0;
    uv.v = Vector(3);
    uv.v << 8, 9, 10;
    const PriceBounds b = price_bounds(spec, uv);
    CHECK(b.p_min == (Vector(3) << -7, -5, -4).finished());
    CHECK(b.p_max == (Vector(3) << -4, -2, -4).finished());
  }
  SUBCASE("degenerate single cell") {
    const MarketSpec one = EmptySpec(1, 1, 1);
    const PriceBounds b = price_bounds(one, {Vector::Zero(1), Vector::Zero(1)});
    CHECK(b.p_min[0] == 0);
    CHECK(b.p_max[0] == 0);
  }
  SUBCASE("unconsumed quality") {
    MarketSpec cut = spec;
    cut.gamma.row(1).setConstant(kNegInf);
    const PriceBounds b = price_bounds(cut, {Vector::Zero(4), Vector::Zero(3)});
    CHECK(b.p_min[1] == kNegInf);
  }
  SUBCASE("unproduced quality") {
    MarketSpec cut = spec;
    cut.alpha.col(0).setConstant(kNegInf);
    const PriceBounds b = price_bounds(cut, {Vector::Zero(4), Vector::Zero(3)});
    CHECK(b.p_max[0] == std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("envelope utilities") {
  const MarketSpec spec = worked_example_market();
  PriceVector p(3);
  p << -7, -5, -4;
  const IndirectUtilities uv = envelope_utilities(spec, p);
  CHECK(uv.u == (Vector(4) << 0, 0, 4, 0).finished());
  CHECK(uv.v == (Vector(3) << 8, 9, 10).finished());
  CHECK((uv.u.array() >= 0).all());
  CHECK((uv.v.array() >= 0).all());
}

}  // TEST_SUITE
}  // namespace
}  // namespace hedonic

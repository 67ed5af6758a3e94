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

#include <omp.h>

#include <cmath>
#include <random>

#include "hedonic/kernels.hpp"
#include "hedonic/market.hpp"
#include "hedonic/rng.hpp"
#include "test_support.hpp"

namespace hedonic {
namespace {

// Forces a multi-threaded team even on single-core hosts.
struct ThreadScope {
  explicit ThreadScope(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadScope() { omp_set_num_threads(saved); }
  int saved;
};

TEST_SUITE("kernels") {

TEST_CASE("logit row") {
  Vector U(3);
  U << 0.0, kNegInf, std::log(2.0);
  const kernels::LogitRow row = kernels::logit_row(U);
  CHECK(row.emax == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(row.probabilities.isApprox((Vector(4) << 0.25, 0.25, 0.0, 0.5).finished(), 1e-15));
  Vector huge(2);
  huge << 800, -800;
  const kernels::LogitRow big = kernels::logit_row(huge);
  CHECK(std::isfinite(big.emax));
  CHECK(big.probabilities[1] == doctest::Approx(1.0));
}

TEST_CASE("price terms: parallel equals serial") {
  std::mt19937_64 gen(41);
  for (int threads : {1, 3, 8}) {
    ThreadScope scope(threads);
    for (int trial = 0; trial < 5; ++trial) {
      MarketSpec spec = testing::RandomRealMarketOfSize(gen, 60, 7, 50);
      spec.alpha(3, 2) = kNegInf;
      const Vector p = Vector::LinSpaced(spec.alpha.cols(), -1.0, 1.0);
      const auto par = kernels::logit_price_terms(spec, p, true);
      const auto ser = kernels::logit_price_terms_serial(spec, p, true);
      CHECK(par.value == ser.value);
      CHECK(par.gradient == ser.gradient);
      CHECK(par.hessian == ser.hessian);
      CHECK(par.supply_shares == ser.supply_shares);
      CHECK(par.demand_shares == ser.demand_shares);
    }
  }
}

TEST_CASE("price terms: hessian matches finite differences of the gradient") {
  std::mt19937_64 gen(42);
  const MarketSpec spec = testing::RandomRealMarket(gen, 5, 4, 5);
  const Vector p = Vector::Constant(spec.alpha.cols(), 0.3);
  const auto at = kernels::logit_price_terms_serial(spec, p, true);
  const double delta = 1e-6;
  for (Eigen::Index z = 0; z < p.size(); ++z) {
    Vector up = p, down = p;
    up[z] += delta;
    down[z] -= delta;
    const Vector fd = (kernels::logit_price_terms_serial(spec, up, false).gradient -
                       kernels::logit_price_terms_serial(spec, down, false).gradient) /
                      (2 * delta);
    CHECK((fd - at.hessian.col(z)).lpNorm<Eigen::Infinity>() <= 1e-6);
  }
  CHECK(at.hessian.isApprox(at.hessian.transpose()));
  CHECK(Eigen::SelfAdjointEigenSolver<Table>(at.hessian).eigenvalues().minCoeff() > 0);
}

TEST_CASE("gumbel fill: parallel equals serial and is keyed by row") {
  const Philox4x32 rng(7);
  for (int threads : {1, 4}) {
    ThreadScope scope(threads);
    Table par(3000, 5), ser(3000, 5);
    kernels::fill_gumbel(rng, StreamSide::kConsumer, 2, par);
    kernels::fill_gumbel_serial(rng, StreamSide::kConsumer, 2, ser);
    CHECK(par == ser);
    CHECK(ser(17, 3) == keyed_gumbel(rng, {StreamSide::kConsumer, 2, 17, 3}));
  }
}

TEST_CASE("resampling: parallel equals serial") {
  const Philox4x32 rng(8);
  // The first entry of each row is its row index.
  const Table source = Table::NullaryExpr(
      9, 4, [](Eigen::Index i, Eigen::Index j) { return double(j * 9 + i); });
  ThreadScope scope(4);
  Table par(2000, 4), ser(2000, 4);
  kernels::fill_resampled(rng, StreamSide::kProducer, 1, source, par);
  kernels::fill_resampled_serial(rng, StreamSide::kProducer, 1, source, ser);
  CHECK(par == ser);
  for (Eigen::Index r = 0; r < ser.rows(); ++r) {
    const double first = ser(r, 0);
    CHECK(first == std::round(first));
    CHECK(ser.row(r) == source.row(Eigen::Index(first)));
  }
}

TEST_CASE("choice counts: parallel equals serial") {
  const Philox4x32 rng(9);
  Table shocks(5000, 4);
  kernels::fill_gumbel_serial(rng, StreamSide::kProducer, 0, shocks);
  Vector systematic(4);
  systematic << 0.0, 0.5, kNegInf, -0.2;
  for (int threads : {1, 2, 6}) {
    ThreadScope scope(threads);
    const auto par = kernels::count_choices(shocks, systematic);
    const auto ser = kernels::count_choices_serial(shocks, systematic);
    CHECK(par == ser);
    CHECK(ser[2] == 0);
    CHECK(ser[0] + ser[1] + ser[3] == 5000);
  }
  // Ties go to the lowest option.
  const auto tied = kernels::count_choices_serial(Table::Zero(10, 3), Vector::Zero(3));
  CHECK(tied == std::vector<std::int64_t>{10, 0, 0});
}

}  // TEST_SUITE
}  // namespace
}  // namespace hedonic

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

// Serial vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare scaling.

#include <benchmark/benchmark.h>

#include <random>

#include "hedonic/kernels.hpp"
#include "hedonic/market.hpp"
#include "hedonic/rng.hpp"

namespace {

using hedonic::MarketSpec;
using hedonic::Table;
using hedonic::Vector;

MarketSpec RandomMarket(int types, int qualities) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> normal;
  MarketSpec spec;
  for (int i = 0; i < types; ++i) {
    spec.producers.push_back("x" + std::to_string(i));
    spec.consumers.push_back("y" + std::to_string(i));
  }
  for (int z = 0; z < qualities; ++z) spec.qualities.push_back("z" + std::to_string(z));
  spec.n = Vector::Ones(types);
  spec.m = Vector::Ones(types);
  spec.alpha = Table::NullaryExpr(types, qualities, [&] { return normal(gen); });
  spec.gamma = Table::NullaryExpr(qualities, types, [&] { return normal(gen); });
  return spec;
}

template <bool kParallel>
void BM_PriceTerms(benchmark::State& state) {
  const MarketSpec spec = RandomMarket(static_cast<int>(state.range(0)), 32);
  const Vector p = Vector::Zero(32);
  for (auto _ : state) {
    auto terms = kParallel ? hedonic::kernels::logit_price_terms(spec, p, true)
                           : hedonic::kernels::logit_price_terms_serial(spec, p, true);
    benchmark::DoNotOptimize(terms.value);
  }
}

template <bool kParallel>
void BM_Gumbel(benchmark::State& state) {
  const hedonic::Philox4x32 rng(42);
  Table out(state.range(0), 33);
  for (auto _ : state) {
    if (kParallel) {
      hedonic::kernels::fill_gumbel(rng, hedonic::StreamSide::kProducer, 0, out);
    } else {
      hedonic::kernels::fill_gumbel_serial(rng, hedonic::StreamSide::kProducer, 0, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * out.size());
}

template <bool kParallel>
void BM_CountChoices(benchmark::State& state) {
  const hedonic::Philox4x32 rng(42);
  Table shocks(state.range(0), 33);
  hedonic::kernels::fill_gumbel_serial(rng, hedonic::StreamSide::kConsumer, 0, shocks);
  Vector systematic = Vector::LinSpaced(33, 0.0, 1.0);
  systematic[0] = 0.0;
  for (auto _ : state) {
    auto counts = kParallel ? hedonic::kernels::count_choices(shocks, systematic)
                            : hedonic::kernels::count_choices_serial(shocks, systematic);
    benchmark::DoNotOptimize(counts.data());
  }
}

}  // namespace

BENCHMARK(BM_PriceTerms<false>)->Arg(64)->Arg(1024);
BENCHMARK(BM_PriceTerms<true>)->Arg(64)->Arg(1024);
BENCHMARK(BM_Gumbel<false>)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_Gumbel<true>)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_CountChoices<false>)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_CountChoices<true>)->Arg(1 << 12)->Arg(1 << 16);

BENCHMARK_MAIN();

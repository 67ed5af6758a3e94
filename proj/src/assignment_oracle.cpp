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

// Exhaustive search over partial matchings of individual agents, used to
// cross-check the flow solver. Independent of the network formulation: it
// only looks at the pair surplus Phi_xy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "hedonic/error.hpp"
#include "hedonic/flow.hpp"

namespace hedonic {
namespace {

constexpr double kMaxStates = 1e6;

class MatchingSearch {
 public:
  MatchingSearch(const MarketSpec& spec, const Table& phi)
      : phi_(phi), free_disposal_(spec.free_disposal) {
    for (std::size_t x = 0; x < spec.num_producers(); ++x) {
      for (long k = 0; k < std::lround(spec.n[x]); ++k) producers_.push_back(x);
      double solo = 0.0;
      if (free_disposal_) {
        for (std::size_t z = 0; z < spec.num_qualities(); ++z) {
          solo = std::max(solo, spec.alpha(x, z));
        }
      }
      solo_.push_back(solo);
    }
    for (std::size_t y = 0; y < spec.num_consumers(); ++y) {
      remaining_.push_back(std::lround(spec.m[y]));
      radix_.push_back(remaining_.back() + 1);
    }
  }

  double Run() { return Best(0); }

 private:
  std::uint64_t Key(std::size_t producer) const {
    std::uint64_t key = producer;
    for (std::size_t y = 0; y < remaining_.size(); ++y) {
      key = key * static_cast<std::uint64_t>(radix_[y]) +
            static_cast<std::uint64_t>(remaining_[y]);
    }
    return key;
  }

  // Best total surplus from producers [i, end) given the consumers left.
  double Best(std::size_t i) {
    if (i == producers_.size()) return 0.0;
    const std::uint64_t key = Key(i);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const std::size_t x = producers_[i];
    double best = solo_[x] + Best(i + 1);
    for (std::size_t y = 0; y < remaining_.size(); ++y) {
      if (remaining_[y] == 0 || phi_(x, y) == kNegInf) continue;
      --remaining_[y];
      best = std::max(best, phi_(x, y) + Best(i + 1));
      ++remaining_[y];
    }
    memo_.emplace(key, best);
    return best;
  }

  const Table& phi_;
  bool free_disposal_;
  std::vector<std::size_t> producers_;
  std::vector<double> solo_;
  std::vector<long> remaining_;
  std::vector<long> radix_;
  std::unordered_map<std::uint64_t, double> memo_;
};

}  // namespace

double assignment_oracle(const MarketSpec& spec) {
  if (!spec.integral()) {
    throw HedonicError(ErrorCode::kNonIntegralMasses,
                       "assignment enumeration needs integral masses");
  }
  double states = spec.n.sum() + 1.0;
  for (Eigen::Index y = 0; y < spec.m.size(); ++y) states *= spec.m[y] + 1.0;
  if (states > kMaxStates) {
    throw HedonicError(ErrorCode::kTooLarge,
                       "population too large for exhaustive matching");
  }
  const IndirectSurplus phi = indirect_surplus_matrix(spec);
  return MatchingSearch(spec, phi.phi).Run();
}

}  // namespace hedonic

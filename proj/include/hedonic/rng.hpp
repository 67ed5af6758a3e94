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

#ifndef HEDONIC_RNG_HPP_
#define HEDONIC_RNG_HPP_

// Counter-based generator (Philox4x32, 10 rounds). A draw is a pure function
// of (seed, counter), so simulated populations do not depend on generation
// order or thread schedule.

#include <array>
#include <cstdint>
#include <string_view>

namespace hedonic {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::string_view kGeneratorId = "philox4x32-10";

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)} {}
  explicit Philox4x32(Key key) : key_(key) {}

  Counter operator()(Counter counter) const;

 private:
  Key key_;
};

enum class StreamSide : std::uint32_t { kProducer = 0, kConsumer = 1 };

// Address of one draw: which side of the market, observable type, agent and
// option. `option` values past |Z| are free for auxiliary streams.
struct DrawKey {
  StreamSide side;
  std::uint32_t type;
  std::uint64_t agent;
  std::uint32_t option;
};

// Uniform on the open interval (0, 1) with 53 random bits.
double keyed_uniform(const Philox4x32& rng, const DrawKey& key);

// Standard Gumbel by inversion: -log(-log(u)).
double keyed_gumbel(const Philox4x32& rng, const DrawKey& key);

// Uniform integer in [0, bound).
std::uint64_t keyed_index(const Philox4x32& rng, const DrawKey& key,
                          std::uint64_t bound);

}  // namespace hedonic

#endif  // HEDONIC_RNG_HPP_

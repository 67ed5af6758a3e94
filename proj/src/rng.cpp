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

#include "hedonic/rng.hpp"

#include <cmath>

namespace hedonic {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
constexpr int kRounds = 10;

inline void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

Philox4x32::Counter CounterOf(const DrawKey& key) {
  return {key.option, static_cast<std::uint32_t>(key.agent),
          static_cast<std::uint32_t>(key.agent >> 32),
          (static_cast<std::uint32_t>(key.side) << 28) ^ key.type};
}

}  // namespace

Philox4x32::Counter Philox4x32::operator()(Counter ctr) const {
  Key key = key_;
  for (int round = 0; round < kRounds; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kMul0, ctr[0], hi0, lo0);
    MulHiLo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double keyed_uniform(const Philox4x32& rng, const DrawKey& key) {
  const auto bits = rng(CounterOf(key));
  const std::uint64_t high = bits[0] >> 5;  // 27 bits
  const std::uint64_t low = bits[1] >> 6;   // 26 bits
  const double mantissa = static_cast<double>((high << 26) | low);
  return (mantissa + 0.5) * 0x1.0p-53;
}

double keyed_gumbel(const Philox4x32& rng, const DrawKey& key) {
  return -std::log(-std::log(keyed_uniform(rng, key)));
}

std::uint64_t keyed_index(const Philox4x32& rng, const DrawKey& key,
                          std::uint64_t bound) {
  const auto bits = rng(CounterOf(key));
  const std::uint64_t word =
      (static_cast<std::uint64_t>(bits[2]) << 32) | bits[3];
  // Multiply-shift maps 64 random bits onto [0, bound).
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(word) * bound) >> 64);
}

}  // namespace hedonic

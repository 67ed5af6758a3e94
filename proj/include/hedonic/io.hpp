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

#ifndef HEDONIC_IO_HPP_
#define HEDONIC_IO_HPP_

// Market, shares, prices and draws documents (JSON), result documents and
// CSV table export. The string "-inf" is the only non-finite number
// accepted or written.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hedonic/entropy.hpp"
#include "hedonic/market.hpp"

namespace hedonic::io {

using Json = nlohmann::json;

struct MarketDocument {
  MarketSpec spec;
  HeterogeneitySpec heterogeneity;  // logit unless the document says otherwise
  std::optional<std::string> draws_file;
};

// Throws HedonicError(kParseError) with line and column for malformed
// syntax, and naming the offending key for schema errors. Relative
// draws_file paths resolve against base_dir.
MarketDocument parse_market(std::string_view text,
                            const std::filesystem::path& base_dir = {});
Json market_to_json(const MarketSpec& spec,
                    const std::optional<std::string>& draws_file = {});

struct SharesDocument {
  ChoiceProbabilities shares;
  Vector n;
  Vector m;
};

// Accepts the keys at top level or under "outputs" (solver results).
SharesDocument parse_shares(std::string_view text);
PriceVector parse_prices(std::string_view text);
Allocation parse_allocation(std::string_view text, const MarketSpec& spec);

HeterogeneitySpec parse_draws(std::string_view text);
Json draws_to_json(const HeterogeneitySpec& het);

Json vector_to_json(const Vector& v);
Json table_to_json(const Table& t);

// Serializes with 17 significant digits per floating number; -inf becomes
// the string "-inf". Object keys come out sorted.
std::string dump(const Json& doc, int indent = 2);

// Hex FNV-1a 64-bit digest of the input bytes.
std::string digest(std::string_view bytes);

std::string table_to_csv(const Table& t,
                         const std::vector<std::string>& row_labels,
                         const std::vector<std::string>& col_labels);

std::string read_file(const std::filesystem::path& path);

}  // namespace hedonic::io

#endif  // HEDONIC_IO_HPP_

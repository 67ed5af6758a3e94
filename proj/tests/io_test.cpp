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

#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "hedonic/error.hpp"
#include "hedonic/io.hpp"
#include "hedonic/market.hpp"
#include "test_support.hpp"

namespace hedonic {
namespace {

using io::Json;

ErrorCode ParseCode(const std::string& text, std::string* message = nullptr) {
  try {
    io::parse_market(text);
  } catch (const HedonicError& e) {
    if (message) *message = e.what();
    return e.code();
  }
  return ErrorCode::kInternal;
}

std::filesystem::path ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("hedonic_io_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

TEST_SUITE("io") {

TEST_CASE("market documents round trip") {
  const MarketSpec spec = worked_example_market();
  const std::string text = io::dump(io::market_to_json(spec));
  const io::MarketDocument doc = io::parse_market(text);
  CHECK(doc.spec.producers == spec.producers);
  CHECK(doc.spec.consumers == spec.consumers);
  CHECK(doc.spec.qualities == spec.qualities);
  CHECK(doc.spec.n == spec.n);
  CHECK(doc.spec.m == spec.m);
  CHECK(doc.spec.alpha == spec.alpha);
  CHECK(doc.spec.gamma == spec.gamma);
  CHECK_FALSE(doc.spec.free_disposal);
  CHECK(doc.heterogeneity.logit());
  CHECK(io::dump(io::market_to_json(doc.spec)) == text);
}

TEST_CASE("emitted example matches the printed tables") {
  const Json doc = Json::parse(io::dump(io::market_to_json(worked_example_market())));
  CHECK(doc["alpha"][0] == Json::array({2, 5, 3}));
  CHECK(doc["gamma"][2] == Json::array({4, 2, 6}));
}

TEST_CASE("forbidden cells and real values survive serialization") {
  std::mt19937_64 gen(51);
  for (int trial = 0; trial < 20; ++trial) {
    MarketSpec spec = testing::RandomRealMarket(gen, 4, 3, 4);
    spec.alpha(0, 0) = kNegInf;
    spec.gamma(spec.gamma.rows() - 1, 0) = kNegInf;
    spec.free_disposal = trial % 2 == 0;
    const std::string text = io::dump(io::market_to_json(spec));
    const MarketSpec back = io::parse_market(text).spec;
    CHECK(back.alpha == spec.alpha);
    CHECK(back.gamma == spec.gamma);
    CHECK(back.n == spec.n);
    CHECK(back.free_disposal == spec.free_disposal);
    CHECK(text.find("\"-inf\"") != std::string::npos);
  }
}

TEST_CASE("seventeen significant digits") {
  Json doc;
  doc["b"] = 0.1;
  doc["a"] = Json::array({1.0 / 3.0, 2.0, -1.5e-300});
  CHECK(io::dump(doc) ==
        "{\n  \"a\": [0.33333333333333331, 2, -1.5000000000000001e-300],\n"
        "  \"b\": 0.10000000000000001\n}\n");
}

TEST_CASE("parse errors") {
  Json doc = io::market_to_json(worked_example_market());
  std::string message;
  SUBCASE("missing gamma") {
    doc.erase("gamma");
    CHECK(ParseCode(doc.dump(), &message) == ErrorCode::kParseError);
    CHECK(message.find("gamma") != std::string::npos);
  }
  SUBCASE("syntax error reports a position") {
    CHECK(ParseCode("{\n  \"producers\": [\n    {\"label\": \"x1\",, }\n", &message) ==
          ErrorCode::kParseError);
    CHECK(message.find("line 3") != std::string::npos);
    CHECK(message.find("column") != std::string::npos);
  }
  SUBCASE("only -inf is accepted as a string") {
    doc["alpha"][0][0] = "inf";
    CHECK(ParseCode(doc.dump()) == ErrorCode::kParseError);
    doc["alpha"][0][0] = "nan";
    CHECK(ParseCode(doc.dump()) == ErrorCode::kParseError);
  }
  SUBCASE("mass must be a number") {
    doc["producers"][0]["mass"] = "one";
    CHECK(ParseCode(doc.dump(), &message) == ErrorCode::kParseError);
    CHECK(message.find("producers[0].mass") != std::string::npos);
  }
  SUBCASE("ragged table") {
    doc["gamma"][1] = Json::array({1, 2});
    CHECK(ParseCode(doc.dump()) == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("validation runs after parsing") {
    doc["consumers"][0]["mass"] = -2;
    CHECK(ParseCode(doc.dump()) == ErrorCode::kNegativeMass);
  }
  SUBCASE("unknown heterogeneity") {
    doc["heterogeneity"] = {{"kind", "probit"}};
    CHECK(ParseCode(doc.dump()) == ErrorCode::kParseError);
  }
}

TEST_CASE("empirical heterogeneity through a draws file") {
  const MarketSpec spec = worked_example_market();
  const HeterogeneitySpec het = empirical_gumbel(spec, 5, 77);
  const auto dir = ScratchDir("draws");
  {
    std::ofstream out(dir / "draws.json");
    out << io::dump(io::draws_to_json(het));
  }
  const std::string text = io::dump(io::market_to_json(spec, std::string("draws.json")));
  const io::MarketDocument doc = io::parse_market(text, dir);
  REQUIRE(doc.draws_file.has_value());
  CHECK(*doc.draws_file == "draws.json");
  CHECK_FALSE(doc.heterogeneity.logit());
  CHECK(doc.heterogeneity.seed == 77);
  for (std::size_t x = 0; x < 4; ++x) {
    CHECK(doc.heterogeneity.producer_draws[x].draws == het.producer_draws[x].draws);
  }
  // Wrong column count for this market.
  HeterogeneitySpec narrow = het;
  narrow.consumer_draws[0].draws = Table::Zero(5, 2);
  {
    std::ofstream out(dir / "narrow.json");
    out << io::dump(io::draws_to_json(narrow));
  }
  const std::string bad = io::dump(io::market_to_json(spec, std::string("narrow.json")));
  CHECK_THROWS_AS(io::parse_market(bad, dir), HedonicError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("shares, prices and allocations") {
  const std::string shares =
      R"({"outputs": {"supply_shares": [[0.25, 0.75]], "demand_shares": [[0.5, 0.5]],)"
      R"( "n": [1], "m": [2]}})";
  const io::SharesDocument s = io::parse_shares(shares);
  CHECK(s.shares.supply(0, 1) == 0.75);
  CHECK(s.m[0] == 2);
  const io::SharesDocument flat = io::parse_shares(
      R"({"supply_shares": [[0.25, 0.75]], "demand_shares": [[0.5, 0.5]], "n": [1], "m": [2]})");
  CHECK(flat.shares.demand == s.shares.demand);
  CHECK_THROWS_AS(io::parse_shares(R"({"supply_shares": [[1]], "n": [1], "m": [1]})"),
                  HedonicError);

  CHECK(io::parse_prices(R"({"p": [-7, -5, -4]})") == (Vector(3) << -7, -5, -4).finished());
  CHECK(io::parse_prices(R"({"outputs": {"p": [1.5]}})")[0] == 1.5);
  CHECK_THROWS_AS(io::parse_prices(R"({"p": ["-inf"]})"), HedonicError);

  const MarketSpec spec = testing::EmptySpec(1, 1, 1);
  const Allocation mu = io::parse_allocation(R"({"mu_xz": [[1]], "mu_zy": [[1]]})", spec);
  CHECK(mu.supply(0, 0) == 1);
  CHECK_THROWS_AS(io::parse_allocation(R"({"mu_xz": [[1, 0]], "mu_zy": [[1]]})", spec),
                  HedonicError);
}

TEST_CASE("digest and csv") {
  CHECK(io::digest("") == "cbf29ce484222325");
  CHECK(io::digest("a") == "af63dc4c8601ec8c");
  Table t(2, 2);
  t << 1, kNegInf, 0.5, -2;
  CHECK(io::table_to_csv(t, {"r1", "r2"}, {"c1", "c2"}) ==
        "label,c1,c2\nr1,1,-inf\nr2,0.5,-2\n");
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS(io::read_file("/nonexistent/hedonic/market.json"), HedonicError);
}

}  // TEST_SUITE
}  // namespace
}  // namespace hedonic

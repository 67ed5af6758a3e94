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

#include "hedonic/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hedonic/error.hpp"

namespace hedonic::io {
namespace {

[[noreturn]] void Fail(const std::string& message) {
  throw HedonicError(ErrorCode::kParseError, message);
}

Json Parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << column << ": " << e.what();
    Fail(os.str());
  }
}

const Json& Require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    Fail(where + ": missing key '" + key + "'");
  }
  return obj.at(key);
}

double Number(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && v.get<std::string>() == "-inf") return kNegInf;
  Fail(where + ": expected a number or \"-inf\"");
}

double FiniteNumber(const Json& v, const std::string& where) {
  if (!v.is_number()) Fail(where + ": expected a finite number");
  return v.get<double>();
}

Vector ReadVector(const Json& v, const std::string& where) {
  if (!v.is_array()) Fail(where + ": expected an array");
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = FiniteNumber(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

Table ReadTable(const Json& v, const std::string& where, bool allow_neg_inf) {
  if (!v.is_array()) Fail(where + ": expected an array of rows");
  const std::size_t rows = v.size();
  const std::size_t cols = rows ? (v[0].is_array() ? v[0].size() : 0) : 0;
  Table out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_where = where + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) Fail(row_where + ": expected an array");
    if (v[i].size() != cols) {
      throw HedonicError(ErrorCode::kDimensionMismatch,
                         row_where + ": ragged row");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const std::string cell = row_where + "[" + std::to_string(j) + "]";
      out(i, j) = allow_neg_inf ? Number(v[i][j], cell)
                                : FiniteNumber(v[i][j], cell);
    }
  }
  return out;
}

void ReadTypes(const Json& list, const std::string& where,
               std::vector<std::string>& labels, Vector& mass) {
  if (!list.is_array()) Fail(where + ": expected an array");
  mass.resize(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string item = where + "[" + std::to_string(i) + "]";
    const Json& label = Require(list[i], "label", item);
    if (!label.is_string()) Fail(item + ".label: expected a string");
    labels.push_back(label.get<std::string>());
    mass[i] = FiniteNumber(Require(list[i], "mass", item), item + ".mass");
  }
}

// Solver results nest their payload under "outputs".
const Json& Payload(const Json& doc) {
  if (doc.is_object() && doc.contains("outputs") && doc.at("outputs").is_object()) {
    return doc.at("outputs");
  }
  return doc;
}

void Emit(const Json& v, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out.push_back('\n');
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out.push_back('{');
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        Emit(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out.push_back('}');
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(v.begin(), v.end(), [](const Json& e) {
        return e.is_structured();
      });
      out.push_back('[');
      bool first = true;
      for (const Json& e : v) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        Emit(e, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out.push_back(']');
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (d == kNegInf) {
        out += "\"-inf\"";
      } else if (!std::isfinite(d)) {
        out += "null";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        out += buf;
      }
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

MarketDocument parse_market(std::string_view text,
                            const std::filesystem::path& base_dir) {
  const Json doc = Parse(text);
  if (!doc.is_object()) Fail("market document must be an object");
  MarketDocument out;
  MarketSpec& spec = out.spec;
  ReadTypes(Require(doc, "producers", "market"), "producers", spec.producers,
            spec.n);
  ReadTypes(Require(doc, "consumers", "market"), "consumers", spec.consumers,
            spec.m);
  const Json& qualities = Require(doc, "qualities", "market");
  if (!qualities.is_array()) Fail("qualities: expected an array");
  for (const Json& q : qualities) {
    if (!q.is_string()) Fail("qualities: expected strings");
    spec.qualities.push_back(q.get<std::string>());
  }
  spec.alpha = ReadTable(Require(doc, "alpha", "market"), "alpha", true);
  spec.gamma = ReadTable(Require(doc, "gamma", "market"), "gamma", true);
  // An empty table parses as 0x0; give it the declared row count so the
  // shape check reports it.
  if (spec.alpha.rows() == 0) spec.alpha.resize(0, spec.num_qualities());
  if (spec.gamma.rows() == 0) spec.gamma.resize(0, spec.num_consumers());
  if (doc.contains("free_disposal")) {
    if (!doc.at("free_disposal").is_boolean()) {
      Fail("free_disposal: expected a boolean");
    }
    spec.free_disposal = doc.at("free_disposal").get<bool>();
  }
  if (doc.contains("heterogeneity")) {
    const Json& het = doc.at("heterogeneity");
    const Json& kind = Require(het, "kind", "heterogeneity");
    if (kind == "logit") {
      out.heterogeneity = HeterogeneitySpec::Logit();
    } else if (kind == "empirical") {
      const Json& file = Require(het, "draws_file", "heterogeneity");
      if (!file.is_string()) Fail("heterogeneity.draws_file: expected a path");
      out.draws_file = file.get<std::string>();
      std::filesystem::path path(*out.draws_file);
      if (path.is_relative()) path = base_dir / path;
      out.heterogeneity = parse_draws(read_file(path));
    } else {
      Fail("heterogeneity.kind: expected \"logit\" or \"empirical\"");
    }
  }
  validate_market(spec);
  validate_heterogeneity(out.heterogeneity, spec);
  return out;
}

Json market_to_json(const MarketSpec& spec,
                    const std::optional<std::string>& draws_file) {
  Json doc;
  auto types = [](const std::vector<std::string>& labels, const Vector& mass) {
    Json list = Json::array();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      list.push_back({{"label", labels[i]}, {"mass", mass[i]}});
    }
    return list;
  };
  doc["producers"] = types(spec.producers, spec.n);
  doc["consumers"] = types(spec.consumers, spec.m);
  doc["qualities"] = spec.qualities;
  doc["alpha"] = table_to_json(spec.alpha);
  doc["gamma"] = table_to_json(spec.gamma);
  doc["free_disposal"] = spec.free_disposal;
  if (draws_file) {
    doc["heterogeneity"] = {{"kind", "empirical"}, {"draws_file", *draws_file}};
  }
  return doc;
}

SharesDocument parse_shares(std::string_view text) {
  const Json doc = Parse(text);
  const Json& body = Payload(doc);
  SharesDocument out;
  out.shares.supply =
      ReadTable(Require(body, "supply_shares", "shares"), "supply_shares", false);
  out.shares.demand =
      ReadTable(Require(body, "demand_shares", "shares"), "demand_shares", false);
  out.n = ReadVector(Require(body, "n", "shares"), "n");
  out.m = ReadVector(Require(body, "m", "shares"), "m");
  return out;
}

PriceVector parse_prices(std::string_view text) {
  const Json doc = Parse(text);
  return ReadVector(Require(Payload(doc), "p", "prices"), "p");
}

Allocation parse_allocation(std::string_view text, const MarketSpec& spec) {
  const Json doc = Parse(text);
  const Json& body = Payload(doc);
  Allocation mu{ReadTable(Require(body, "mu_xz", "result"), "mu_xz", false),
                ReadTable(Require(body, "mu_zy", "result"), "mu_zy", false)};
  if (static_cast<std::size_t>(mu.supply.rows()) != spec.num_producers() ||
      static_cast<std::size_t>(mu.supply.cols()) != spec.num_qualities() ||
      static_cast<std::size_t>(mu.demand.rows()) != spec.num_qualities() ||
      static_cast<std::size_t>(mu.demand.cols()) != spec.num_consumers()) {
    Fail("allocation dimensions do not match the market");
  }
  return mu;
}

HeterogeneitySpec parse_draws(std::string_view text) {
  const Json doc = Parse(text);
  HeterogeneitySpec het;
  het.kind = HeterogeneitySpec::Kind::kEmpirical;
  auto side = [&](const char* key, std::vector<EmpiricalShocks>& out) {
    const Json& list = Require(doc, key, "draws");
    if (!list.is_array()) Fail(std::string("draws.") + key + ": expected an array");
    for (std::size_t t = 0; t < list.size(); ++t) {
      out.push_back({ReadTable(list[t],
                               std::string(key) + "[" + std::to_string(t) + "]",
                               false)});
    }
  };
  side("producers", het.producer_draws);
  side("consumers", het.consumer_draws);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) Fail("draws.seed: expected an unsigned integer");
    het.seed = doc.at("seed").get<std::uint64_t>();
  }
  return het;
}

Json draws_to_json(const HeterogeneitySpec& het) {
  Json doc;
  doc["producers"] = Json::array();
  doc["consumers"] = Json::array();
  for (const auto& d : het.producer_draws) doc["producers"].push_back(table_to_json(d.draws));
  for (const auto& d : het.consumer_draws) doc["consumers"].push_back(table_to_json(d.draws));
  doc["seed"] = het.seed;
  return doc;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json table_to_json(const Table& t) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      if (t(i, j) == kNegInf) {
        row.push_back("-inf");
      } else {
        row.push_back(t(i, j));
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string dump(const Json& doc, int indent) {
  std::string out;
  Emit(doc, indent, 0, out);
  out.push_back('\n');
  return out;
}

std::string digest(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string table_to_csv(const Table& t,
                         const std::vector<std::string>& row_labels,
                         const std::vector<std::string>& col_labels) {
  std::string out = "label";
  for (const auto& c : col_labels) out += "," + c;
  out += "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    out += row_labels.at(i);
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      if (t(i, j) == kNegInf) {
        out += ",-inf";
      } else {
        std::snprintf(buf, sizeof buf, ",%.17g", t(i, j));
        out += buf;
      }
    }
    out += "\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace hedonic::io

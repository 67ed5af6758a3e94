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

// hedonic: command-line front end.
//
//   hedonic example [-o FILE]
//   hedonic solve-flow MARKET [--free-disposal] [--tol T] [--bounds] [--format F]
//   hedonic solve-logit MARKET [--tol T] [--max-iter K] [--format F]
//   hedonic identify SHARES PRICES [--market MARKET] [--path logit|conjugate]
//   hedonic simulate MARKET --agents N --seed S [--round-trip] [--exact-shares]
//   hedonic verify MARKET RESULT [--tol T]
//
// Exit status: 0 success, 2 parse/validation/usage, 3 no convergence,
// 4 identification precondition, 5 internal.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <tuple>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hedonic/entropy.hpp"
#include "hedonic/error.hpp"
#include "hedonic/flow.hpp"
#include "hedonic/identification.hpp"
#include "hedonic/io.hpp"
#include "hedonic/market.hpp"
#include "hedonic/simulator.hpp"

namespace {

using hedonic::Table;
using hedonic::Vector;
using hedonic::io::Json;

constexpr const char* kToolVersion = "0.1.0";

enum class Format { kText, kJson, kCsv };

struct Invocation {
  std::string command_line;
  std::string input_digest;
};

Json Envelope(const std::string& command, const Invocation& inv) {
  Json doc;
  doc["command"] = command;
  doc["invocation"] = inv.command_line;
  doc["input_digest"] = inv.input_digest;
  doc["tool_version"] = kToolVersion;
  return doc;
}

std::string Num(double v) {
  if (v == hedonic::kNegInf) return "-inf";
  if (v == -hedonic::kNegInf) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void PrintVector(std::ostream& os, const std::string& name, const Vector& v,
                 const std::vector<std::string>& labels) {
  os << name << ":";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    os << "  " << labels.at(i) << "=" << Num(v[i]);
  }
  os << "\n";
}

void PrintTable(std::ostream& os, const std::string& name, const Table& t,
                const std::vector<std::string>& rows,
                const std::vector<std::string>& cols) {
  os << name << ":\n";
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    os << "  " << rows.at(i) << ":";
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      os << "  " << cols.at(j) << "=" << Num(t(i, j));
    }
    os << "\n";
  }
}

std::vector<std::string> WithOptOut(const std::vector<std::string>& qualities) {
  std::vector<std::string> out{"opt_out"};
  out.insert(out.end(), qualities.begin(), qualities.end());
  return out;
}

std::vector<std::string> Numbered(const char* prefix, Eigen::Index count) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < count; ++i) {
    out.push_back(prefix + std::to_string(i + 1));
  }
  return out;
}

Format ParseFormat(const std::string& name) {
  if (name == "text") return Format::kText;
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  throw hedonic::HedonicError(hedonic::ErrorCode::kUsage,
                              "unknown format '" + name + "'");
}

hedonic::io::MarketDocument LoadMarket(const std::string& path,
                                       std::string& bytes) {
  bytes = hedonic::io::read_file(path);
  return hedonic::io::parse_market(
      bytes, std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------- solve-flow

int SolveFlow(const std::string& market_path, bool free_disposal, double tol,
              bool bounds, Format format, Invocation inv) {
  std::string bytes;
  auto doc = LoadMarket(market_path, bytes);
  hedonic::MarketSpec& spec = doc.spec;
  if (free_disposal) spec.free_disposal = true;
  inv.input_digest = hedonic::io::digest(bytes);

  const hedonic::EquilibriumOutcome eq = hedonic::solve_equilibrium(spec, tol);
  const hedonic::VerificationReport report =
      hedonic::verify_equilibrium(spec, eq.p, eq.mu, tol);
  const auto& hi = eq.extremes.producer_optimal;
  const auto& lo = eq.extremes.consumer_optimal;
  const hedonic::PriceBounds pb =
      hedonic::price_bounds(spec, {hi.u, lo.v});

  if (format == Format::kText) {
    std::ostream& os = std::cout;
    os << "welfare: " << Num(eq.welfare) << "\n";
    PrintVector(os, "prices", eq.p, spec.qualities);
    PrintTable(os, "supply mu_xz", eq.mu.supply, spec.producers, spec.qualities);
    PrintTable(os, "demand mu_zy", eq.mu.demand, spec.qualities, spec.consumers);
    PrintVector(os, "u", eq.uv.u, spec.producers);
    PrintVector(os, "v", eq.uv.v, spec.consumers);
    if (bounds) {
      PrintVector(os, "u_min", lo.u, spec.producers);
      PrintVector(os, "u_max", hi.u, spec.producers);
      PrintVector(os, "v_min", hi.v, spec.consumers);
      PrintVector(os, "v_max", lo.v, spec.consumers);
      os << "price bounds:";
      for (std::size_t z = 0; z < spec.num_qualities(); ++z) {
        os << "  " << spec.qualities[z] << "=[" << Num(pb.p_min[z]) << ", "
           << Num(pb.p_max[z]) << "]";
      }
      os << "\n";
    }
    os << "equilibrium check: " << (report.all_clear() ? "ok" : "FAILED")
       << " (max residual " << Num(report.max_residual) << ")\n";
    return 0;
  }
  if (format == Format::kCsv) {
    std::cout << "# prices\n"
              << hedonic::io::table_to_csv(eq.p.transpose(), {"p"},
                                           spec.qualities)
              << "\n# mu_xz\n"
              << hedonic::io::table_to_csv(eq.mu.supply, spec.producers,
                                           spec.qualities)
              << "\n# mu_zy\n"
              << hedonic::io::table_to_csv(eq.mu.demand, spec.qualities,
                                           spec.consumers);
    if (bounds) {
      Table t(2, spec.num_qualities());
      t.row(0) = pb.p_min.transpose();
      t.row(1) = pb.p_max.transpose();
      std::cout << "\n# price_bounds\n"
                << hedonic::io::table_to_csv(t, {"p_min", "p_max"},
                                             spec.qualities);
    }
    return 0;
  }

  Json out = Envelope("solve-flow", inv);
  Json& o = out["outputs"];
  o["producers"] = spec.producers;
  o["consumers"] = spec.consumers;
  o["qualities"] = spec.qualities;
  o["p"] = hedonic::io::vector_to_json(eq.p);
  o["mu_xz"] = hedonic::io::table_to_json(eq.mu.supply);
  o["mu_zy"] = hedonic::io::table_to_json(eq.mu.demand);
  o["u"] = hedonic::io::vector_to_json(eq.uv.u);
  o["v"] = hedonic::io::vector_to_json(eq.uv.v);
  o["welfare"] = eq.welfare;
  if (spec.free_disposal) o["disposal"] = hedonic::io::vector_to_json(eq.disposal);
  if (bounds) {
    o["extremal_duals"] = {{"u_min", hedonic::io::vector_to_json(lo.u)},
                           {"u_max", hedonic::io::vector_to_json(hi.u)},
                           {"v_min", hedonic::io::vector_to_json(hi.v)},
                           {"v_max", hedonic::io::vector_to_json(lo.v)}};
    o["price_bounds"] = {{"p_min", hedonic::io::vector_to_json(pb.p_min)},
                         {"p_max", hedonic::io::vector_to_json(pb.p_max)}};
  }
  Json& d = out["diagnostics"];
  d["dual_value"] = eq.dual_value;
  d["slackness_residual"] = eq.slackness_residual;
  d["exact_arithmetic"] = eq.exact_arithmetic;
  d["augmentations"] = eq.augmentations;
  d["equilibrium_verified"] = report.all_clear();
  d["verification_max_residual"] = report.max_residual;
  std::cout << hedonic::io::dump(out);
  return 0;
}

// --------------------------------------------------------------- solve-logit

Json SmoothOutputs(const hedonic::MarketSpec& spec,
                   const hedonic::SmoothEquilibrium& eq) {
  Json o;
  o["producers"] = spec.producers;
  o["consumers"] = spec.consumers;
  o["qualities"] = spec.qualities;
  o["p"] = hedonic::io::vector_to_json(eq.p);
  o["mu_xz"] = hedonic::io::table_to_json(eq.mu.supply);
  o["mu_zy"] = hedonic::io::table_to_json(eq.mu.demand);
  o["supply_shares"] = hedonic::io::table_to_json(eq.shares.supply);
  o["demand_shares"] = hedonic::io::table_to_json(eq.shares.demand);
  o["n"] = hedonic::io::vector_to_json(spec.n);
  o["m"] = hedonic::io::vector_to_json(spec.m);
  o["welfare"] = eq.welfare;
  return o;
}

int SolveLogit(const std::string& market_path, double tol,
               std::size_t max_iter, Format format, Invocation inv) {
  std::string bytes;
  const auto doc = LoadMarket(market_path, bytes);
  const hedonic::MarketSpec& spec = doc.spec;
  inv.input_digest = hedonic::io::digest(bytes);

  hedonic::PriceSolverOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  hedonic::SmoothEquilibrium eq;
  int status = 0;
  std::string error;
  try {
    eq = hedonic::solve_price_equilibrium(spec, doc.heterogeneity, opts);
  } catch (const hedonic::NotConverged& e) {
    eq = e.partial();
    status = hedonic::ExitStatus(e.code());
    error = e.what();
    std::cerr << "hedonic: " << hedonic::ErrorCodeName(e.code()) << ": "
              << e.what() << "\n";
  }

  if (format == Format::kText) {
    std::ostream& os = std::cout;
    os << (eq.converged ? "converged" : "NOT converged") << " after "
       << eq.iterations << " iterations, clearing residual "
       << Num(eq.clearing_residual) << "\n";
    os << "welfare: " << Num(eq.welfare) << "\n";
    PrintVector(os, "prices", eq.p, spec.qualities);
    PrintTable(os, "supply shares", eq.shares.supply, spec.producers,
               WithOptOut(spec.qualities));
    PrintTable(os, "demand shares", eq.shares.demand, spec.consumers,
               WithOptOut(spec.qualities));
    if (eq.non_unique) os << "note: equilibrium prices are not unique\n";
    return status;
  }
  if (format == Format::kCsv) {
    std::cout << "# prices\n"
              << hedonic::io::table_to_csv(eq.p.transpose(), {"p"},
                                           spec.qualities)
              << "\n# supply_shares\n"
              << hedonic::io::table_to_csv(eq.shares.supply, spec.producers,
                                           WithOptOut(spec.qualities))
              << "\n# demand_shares\n"
              << hedonic::io::table_to_csv(eq.shares.demand, spec.consumers,
                                           WithOptOut(spec.qualities));
    return status;
  }
  Json out = Envelope("solve-logit", inv);
  out["outputs"] = SmoothOutputs(spec, eq);
  Json& d = out["diagnostics"];
  d["clearing_residual"] = eq.clearing_residual;
  d["iterations"] = eq.iterations;
  d["converged"] = eq.converged;
  d["non_unique"] = eq.non_unique;
  d["heterogeneity"] = doc.heterogeneity.logit() ? "logit" : "empirical";
  if (!error.empty()) d["error"] = error;
  std::cout << hedonic::io::dump(out);
  return status;
}

// ------------------------------------------------------------------ identify

int Identify(const std::string& shares_path, const std::string& prices_path,
             const std::string& market_path, const std::string& path_name,
             Format format, Invocation inv) {
  const std::string shares_bytes = hedonic::io::read_file(shares_path);
  const std::string prices_bytes = hedonic::io::read_file(prices_path);
  std::string digest_input = shares_bytes + '\0' + prices_bytes;

  const auto shares = hedonic::io::parse_shares(shares_bytes);
  hedonic::ObservedMarket obs{shares.shares, shares.n, shares.m,
                              hedonic::io::parse_prices(prices_bytes),
                              hedonic::HeterogeneitySpec::Logit()};
  std::vector<std::string> producers = Numbered("x", obs.n.size());
  std::vector<std::string> consumers = Numbered("y", obs.m.size());
  std::vector<std::string> qualities = Numbered("z", obs.p.size());
  if (!market_path.empty()) {
    std::string bytes;
    const auto doc = LoadMarket(market_path, bytes);
    digest_input += '\0' + bytes;
    obs.heterogeneity = doc.heterogeneity;
    producers = doc.spec.producers;
    consumers = doc.spec.consumers;
    qualities = doc.spec.qualities;
    if (producers.size() != static_cast<std::size_t>(obs.n.size()) ||
        consumers.size() != static_cast<std::size_t>(obs.m.size()) ||
        qualities.size() != static_cast<std::size_t>(obs.p.size())) {
      throw hedonic::HedonicError(hedonic::ErrorCode::kDimensionMismatch,
                                  "shares do not match the market");
    }
  }
  inv.input_digest = hedonic::io::digest(digest_input);

  hedonic::IdentificationOptions options;
  if (path_name == "logit") {
    options.path = hedonic::IdentificationPath::kLogitClosedForm;
  } else if (path_name == "conjugate" || path_name == "generic") {
    options.path = hedonic::IdentificationPath::kConjugate;
  } else {
    throw hedonic::HedonicError(hedonic::ErrorCode::kUsage,
                                "unknown identification path '" + path_name + "'");
  }
  const hedonic::IdentifiedPrimitives id =
      hedonic::identify_primitives(obs, options);

  if (format == Format::kText) {
    PrintTable(std::cout, "alpha_hat", id.alpha_hat, producers, qualities);
    PrintTable(std::cout, "gamma_hat", id.gamma_hat, qualities, consumers);
    std::cout << "share residual: " << Num(id.residual) << "\n";
    return 0;
  }
  if (format == Format::kCsv) {
    std::cout << "# alpha_hat\n"
              << hedonic::io::table_to_csv(id.alpha_hat, producers, qualities)
              << "\n# gamma_hat\n"
              << hedonic::io::table_to_csv(id.gamma_hat, qualities, consumers);
    return 0;
  }
  Json out = Envelope("identify", inv);
  Json& o = out["outputs"];
  o["producers"] = producers;
  o["consumers"] = consumers;
  o["qualities"] = qualities;
  o["alpha"] = hedonic::io::table_to_json(id.alpha_hat);
  o["gamma"] = hedonic::io::table_to_json(id.gamma_hat);
  o["U"] = hedonic::io::table_to_json(id.utilities.U);
  o["V"] = hedonic::io::table_to_json(id.utilities.V);
  out["diagnostics"] = {{"path", path_name}, {"share_residual", id.residual}};
  std::cout << hedonic::io::dump(out);
  return 0;
}

// ------------------------------------------------------------------ simulate

int Simulate(const std::string& market_path, std::size_t agents,
             std::uint64_t seed, bool round_trip, bool exact_shares,
             Format format, Invocation inv) {
  if (agents == 0) {
    throw hedonic::HedonicError(hedonic::ErrorCode::kUsage,
                                "--agents must be at least 1");
  }
  std::string bytes;
  const auto doc = LoadMarket(market_path, bytes);
  const hedonic::MarketSpec& spec = doc.spec;
  inv.input_digest = hedonic::io::digest(bytes);
  Json out = Envelope("simulate", inv);
  out["seed"] = seed;
  Json& o = out["outputs"];
  o["producers"] = spec.producers;
  o["consumers"] = spec.consumers;
  o["qualities"] = spec.qualities;
  o["agents_per_type"] = agents;

  if (round_trip) {
    const hedonic::RoundTripReport r =
        hedonic::round_trip(spec, doc.heterogeneity, agents, seed, exact_shares);
    if (format == Format::kText) {
      std::cout << "alpha_err: " << Num(r.alpha_err) << "\n"
                << "gamma_err: " << Num(r.gamma_err) << "\n"
                << "share_gap: " << Num(r.share_gap) << "\n"
                << "clearing_residual: " << Num(r.clearing_residual) << "\n";
      PrintTable(std::cout, "alpha_hat", r.alpha_hat, spec.producers,
                 spec.qualities);
      PrintTable(std::cout, "gamma_hat", r.gamma_hat, spec.qualities,
                 spec.consumers);
      return 0;
    }
    if (format == Format::kCsv) {
      std::cout << "# alpha_hat\n"
                << hedonic::io::table_to_csv(r.alpha_hat, spec.producers,
                                             spec.qualities)
                << "\n# gamma_hat\n"
                << hedonic::io::table_to_csv(r.gamma_hat, spec.qualities,
                                             spec.consumers);
      return 0;
    }
    o["p"] = hedonic::io::vector_to_json(r.prices);
    o["alpha_err"] = r.alpha_err;
    o["gamma_err"] = r.gamma_err;
    o["share_gap"] = r.share_gap;
    o["alpha_hat"] = hedonic::io::table_to_json(r.alpha_hat);
    o["gamma_hat"] = hedonic::io::table_to_json(r.gamma_hat);
    o["supply_shares"] = hedonic::io::table_to_json(r.empirical.supply);
    o["demand_shares"] = hedonic::io::table_to_json(r.empirical.demand);
    o["n"] = hedonic::io::vector_to_json(spec.n);
    o["m"] = hedonic::io::vector_to_json(spec.m);
    out["diagnostics"] = {{"clearing_residual", r.clearing_residual},
                          {"exact_shares", r.exact_shares}};
    std::cout << hedonic::io::dump(out);
    return 0;
  }

  const hedonic::SmoothEquilibrium eq =
      hedonic::solve_price_equilibrium(spec, doc.heterogeneity);
  const hedonic::Population pop =
      hedonic::draw_population(spec, doc.heterogeneity, agents, seed);
  const hedonic::EmpiricalShares sim = hedonic::simulate_choices(pop, spec, eq.p);
  if (format == Format::kText) {
    PrintVector(std::cout, "prices", eq.p, spec.qualities);
    PrintTable(std::cout, "supply shares", sim.shares.supply, spec.producers,
               WithOptOut(spec.qualities));
    PrintTable(std::cout, "demand shares", sim.shares.demand, spec.consumers,
               WithOptOut(spec.qualities));
    return 0;
  }
  if (format == Format::kCsv) {
    std::cout << "# supply_shares\n"
              << hedonic::io::table_to_csv(sim.shares.supply, spec.producers,
                                           WithOptOut(spec.qualities))
              << "\n# demand_shares\n"
              << hedonic::io::table_to_csv(sim.shares.demand, spec.consumers,
                                           WithOptOut(spec.qualities));
    return 0;
  }
  o["p"] = hedonic::io::vector_to_json(eq.p);
  o["supply_counts"] = sim.supply_counts;
  o["demand_counts"] = sim.demand_counts;
  o["supply_shares"] = hedonic::io::table_to_json(sim.shares.supply);
  o["demand_shares"] = hedonic::io::table_to_json(sim.shares.demand);
  o["n"] = hedonic::io::vector_to_json(spec.n);
  o["m"] = hedonic::io::vector_to_json(spec.m);
  out["diagnostics"] = {{"generator", pop.generator_id},
                        {"clearing_residual", eq.clearing_residual}};
  std::cout << hedonic::io::dump(out);
  return 0;
}

// -------------------------------------------------------------------- verify

int Verify(const std::string& market_path, const std::string& result_path,
           double tol, Format format, Invocation inv) {
  std::string bytes;
  const auto doc = LoadMarket(market_path, bytes);
  const std::string result_bytes = hedonic::io::read_file(result_path);
  inv.input_digest = hedonic::io::digest(bytes + '\0' + result_bytes);
  const hedonic::PriceVector p = hedonic::io::parse_prices(result_bytes);
  if (static_cast<std::size_t>(p.size()) != doc.spec.num_qualities()) {
    throw hedonic::HedonicError(hedonic::ErrorCode::kParseError,
                                "price vector does not match the market");
  }
  const hedonic::Allocation mu =
      hedonic::io::parse_allocation(result_bytes, doc.spec);
  const hedonic::VerificationReport report =
      hedonic::verify_equilibrium(doc.spec, p, mu, tol);

  auto describe = [&](const hedonic::RationalityViolation& v) {
    const bool producer = v.side == hedonic::Side::kProducer;
    const auto& label = producer ? doc.spec.producers[v.agent_type]
                                 : doc.spec.consumers[v.agent_type];
    auto option = [&](const std::optional<std::size_t>& z) {
      return z ? doc.spec.qualities[*z] : std::string("opt_out");
    };
    return std::make_tuple(label, option(v.chosen), option(v.better));
  };

  if (format != Format::kJson) {
    std::cout << (report.all_clear() ? "equilibrium: yes" : "equilibrium: NO")
              << "\npeople counting: " << (report.people_counting_ok ? "ok" : "violated")
              << "\nmarket clearing: " << (report.market_clearing_ok ? "ok" : "violated")
              << "\nmax residual: " << Num(report.max_residual) << "\n";
    for (const auto& v : report.rationality_violations) {
      const auto [who, chosen, better] = describe(v);
      std::cout << "  " << who << " chose " << chosen << " but " << better
                << " pays " << Num(v.slack) << " more\n";
    }
    return 0;
  }
  Json out = Envelope("verify", inv);
  Json& o = out["outputs"];
  o["all_clear"] = report.all_clear();
  o["people_counting_ok"] = report.people_counting_ok;
  o["market_clearing_ok"] = report.market_clearing_ok;
  o["max_residual"] = report.max_residual;
  o["rationality_violations"] = Json::array();
  for (const auto& v : report.rationality_violations) {
    const auto [who, chosen, better] = describe(v);
    o["rationality_violations"].push_back(
        {{"side", v.side == hedonic::Side::kProducer ? "producer" : "consumer"},
         {"type", who},
         {"chosen", chosen},
         {"better", better},
         {"slack", v.slack}});
  }
  out["diagnostics"] = {{"tol", tol}};
  std::cout << hedonic::io::dump(out);
  return 0;
}

// ------------------------------------------------------------------- example

int Example(const std::string& output_path) {
  const std::string text =
      hedonic::io::dump(hedonic::io::market_to_json(hedonic::worked_example_market()));
  if (output_path.empty() || output_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    throw hedonic::HedonicError(hedonic::ErrorCode::kUsage,
                                "cannot write '" + output_path + "'");
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium and identification tools for discrete hedonic markets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string format_name = "text";
  std::string market_path, result_path, shares_path, prices_path, output_path;
  std::string identify_path = "logit";
  double tol = hedonic::kDefaultTolerance;
  double logit_tol = 1e-10;
  std::size_t max_iter = 200;
  std::size_t agents = 0;
  std::uint64_t seed = 0;
  bool free_disposal = false, bounds = false, round_trip = false,
       exact_shares = false;

  auto* example = app.add_subcommand("example", "Write the built-in example market");
  example->add_option("-o,--output", output_path, "Output file (default stdout)");

  auto* flow = app.add_subcommand("solve-flow", "Equilibrium via maximum surplus flow");
  flow->add_option("market", market_path, "Market document")->required();
  flow->add_flag("--free-disposal", free_disposal, "Allow supply to exceed demand");
  flow->add_option("--tol", tol, "Verification tolerance");
  flow->add_flag("--bounds", bounds, "Report extremal duals and price bounds");
  flow->add_option("--format", format_name, "text|json|csv");

  auto* logit = app.add_subcommand("solve-logit", "Equilibrium with taste heterogeneity");
  logit->add_option("market", market_path, "Market document")->required();
  logit->add_option("--tol", logit_tol, "Excess supply tolerance");
  logit->add_option("--max-iter", max_iter, "Newton iteration cap");
  logit->add_option("--format", format_name, "text|json|csv");

  auto* identify = app.add_subcommand("identify", "Recover alpha and gamma from shares and prices");
  identify->add_option("shares", shares_path, "Shares document")->required();
  identify->add_option("prices", prices_path, "Prices document")->required();
  identify->add_option("--market", market_path, "Market document for labels and heterogeneity");
  identify->add_option("--path", identify_path, "logit|conjugate (alias generic)");
  identify->add_option("--format", format_name, "text|json|csv");

  auto* simulate = app.add_subcommand("simulate", "Simulate agents at equilibrium prices");
  simulate->add_option("market", market_path, "Market document")->required();
  simulate->add_option("--agents", agents, "Agents per observable type")->required();
  simulate->add_option("--seed", seed, "Generator seed");
  simulate->add_flag("--round-trip", round_trip, "Identify from simulated shares and report errors");
  simulate->add_flag("--exact-shares", exact_shares, "Use theoretical shares in the round trip");
  simulate->add_option("--format", format_name, "text|json|csv");

  auto* verify = app.add_subcommand("verify", "Check a result against the equilibrium conditions");
  verify->add_option("market", market_path, "Market document")->required();
  verify->add_option("result", result_path, "Result document with p, mu_xz, mu_zy")->required();
  verify->add_option("--tol", tol, "Tolerance");
  verify->add_option("--format", format_name, "text|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Invocation inv;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) inv.command_line += ' ';
    inv.command_line += argv[i];
  }

  try {
    const Format format = ParseFormat(format_name);
    if (*example) return Example(output_path);
    if (*flow) return SolveFlow(market_path, free_disposal, tol, bounds, format, inv);
    if (*logit) return SolveLogit(market_path, logit_tol, max_iter, format, inv);
    if (*identify) {
      return Identify(shares_path, prices_path, market_path, identify_path,
                      format, inv);
    }
    if (*simulate) {
      return Simulate(market_path, agents, seed, round_trip, exact_shares,
                      format, inv);
    }
    if (*verify) return Verify(market_path, result_path, tol, format, inv);
  } catch (const hedonic::HedonicError& e) {
    std::cerr << "hedonic: " << hedonic::ErrorCodeName(e.code()) << ": "
              << e.what() << "\n";
    return hedonic::ExitStatus(e.code());
  } catch (const std::exception& e) {
    std::cerr << "hedonic: internal error: " << e.what() << "\n";
    return 5;
  }
  return 5;
}

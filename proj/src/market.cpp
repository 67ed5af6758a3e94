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

#include "hedonic/market.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hedonic/error.hpp"

namespace hedonic {
namespace {

void CheckUnique(const std::vector<std::string>& labels, const char* what) {
  if (labels.empty()) {
    throw HedonicError(ErrorCode::kDimensionMismatch,
                       std::string("no ") + what + " declared");
  }
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw HedonicError(ErrorCode::kDimensionMismatch,
                         std::string("duplicate ") + what + " label '" +
                             label + "'");
    }
  }
}

void CheckShape(const Table& t, std::size_t rows, std::size_t cols,
                const char* name) {
  if (static_cast<std::size_t>(t.rows()) != rows ||
      static_cast<std::size_t>(t.cols()) != cols) {
    std::ostringstream os;
    os << name << " has shape " << t.rows() << "x" << t.cols()
       << ", expected " << rows << "x" << cols;
    throw HedonicError(ErrorCode::kDimensionMismatch, os.str());
  }
}

void CheckSurplus(const Table& t, const char* name) {
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      const double s = t(i, j);
      if (std::isnan(s) || s == std::numeric_limits<double>::infinity()) {
        std::ostringstream os;
        os << name << "(" << i << "," << j << ") must be finite or -inf";
        throw HedonicError(ErrorCode::kInvalidSurplus, os.str());
      }
    }
  }
}

void CheckMasses(const Vector& mass, const char* name) {
  for (Eigen::Index i = 0; i < mass.size(); ++i) {
    if (!std::isfinite(mass[i])) {
      throw HedonicError(ErrorCode::kNegativeMass,
                         std::string(name) + " must be finite");
    }
    if (mass[i] < 0.0) {
      std::ostringstream os;
      os << name << "[" << i << "] = " << mass[i] << " is negative";
      throw HedonicError(ErrorCode::kNegativeMass, os.str());
    }
  }
}

}  // namespace

bool MarketSpec::integral() const {
  auto is_int = [](double v) { return std::floor(v) == v; };
  return std::all_of(n.data(), n.data() + n.size(), is_int) &&
         std::all_of(m.data(), m.data() + m.size(), is_int);
}

std::vector<MarketWarning> validate_market(const MarketSpec& spec) {
  CheckUnique(spec.producers, "producer");
  CheckUnique(spec.consumers, "consumer");
  CheckUnique(spec.qualities, "quality");
  const std::size_t nx = spec.num_producers();
  const std::size_t ny = spec.num_consumers();
  const std::size_t nz = spec.num_qualities();
  if (static_cast<std::size_t>(spec.n.size()) != nx ||
      static_cast<std::size_t>(spec.m.size()) != ny) {
    throw HedonicError(ErrorCode::kDimensionMismatch,
                       "mass vectors do not match the type sets");
  }
  CheckShape(spec.alpha, nx, nz, "alpha");
  CheckShape(spec.gamma, nz, ny, "gamma");
  CheckMasses(spec.n, "n");
  CheckMasses(spec.m, "m");
  CheckSurplus(spec.alpha, "alpha");
  CheckSurplus(spec.gamma, "gamma");

  std::vector<MarketWarning> warnings;
  for (std::size_t x = 0; x < nx; ++x) {
    if ((spec.alpha.row(x).array() == kNegInf).all()) {
      warnings.push_back({MarketWarning::Kind::kAllInfeasibleProducer, x,
                          "producer '" + spec.producers[x] +
                              "' cannot supply any quality"});
    }
  }
  for (std::size_t y = 0; y < ny; ++y) {
    if ((spec.gamma.col(y).array() == kNegInf).all()) {
      warnings.push_back({MarketWarning::Kind::kAllInfeasibleConsumer, y,
                          "consumer '" + spec.consumers[y] +
                              "' cannot demand any quality"});
    }
  }
  return warnings;
}

Allocation Allocation::Zero(const MarketSpec& spec) {
  return {Table::Zero(spec.num_producers(), spec.num_qualities()),
          Table::Zero(spec.num_qualities(), spec.num_consumers())};
}

Vector Allocation::producer_optout(const Vector& n) const {
  return n - supply.rowwise().sum();
}

Vector Allocation::consumer_optout(const Vector& m) const {
  return m - demand.colwise().sum().transpose();
}

IndirectSurplus indirect_surplus_matrix(const MarketSpec& spec) {
  const std::size_t nx = spec.num_producers();
  const std::size_t ny = spec.num_consumers();
  const std::size_t nz = spec.num_qualities();
  IndirectSurplus out;
  out.phi = Table::Constant(nx, ny, kNegInf);
  out.argmax.assign(nx, std::vector<std::vector<std::size_t>>(ny));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      double best = kNegInf;
      auto& args = out.argmax[x][y];
      for (std::size_t z = 0; z < nz; ++z) {
        const double a = spec.alpha(x, z);
        const double g = spec.gamma(z, y);
        if (a == kNegInf || g == kNegInf) continue;
        const double s = a + g;
        if (s > best) {
          best = s;
          args.assign(1, z);
        } else if (s == best) {
          args.push_back(z);
        }
      }
      out.phi(x, y) = best;
    }
  }
  return out;
}

double welfare(const MarketSpec& spec, const Allocation& mu, double tol) {
  const std::size_t nx = spec.num_producers();
  const std::size_t ny = spec.num_consumers();
  const std::size_t nz = spec.num_qualities();
  CheckShape(mu.supply, nx, nz, "supply allocation");
  CheckShape(mu.demand, nz, ny, "demand allocation");
  if ((mu.supply.array() < -tol).any() || (mu.demand.array() < -tol).any()) {
    throw HedonicError(ErrorCode::kConstraintViolation,
                       "allocation has negative mass");
  }
  const Vector out_x = mu.producer_optout(spec.n);
  const Vector out_y = mu.consumer_optout(spec.m);
  if ((out_x.array() < -tol).any() || (out_y.array() < -tol).any()) {
    throw HedonicError(ErrorCode::kConstraintViolation,
                       "allocation exceeds a type's mass");
  }
  const Vector imbalance =
      mu.supply.colwise().sum().transpose() - mu.demand.rowwise().sum();
  for (std::size_t z = 0; z < nz; ++z) {
    const bool ok = spec.free_disposal ? imbalance[z] >= -tol
                                       : std::abs(imbalance[z]) <= tol;
    if (!ok) {
      throw HedonicError(ErrorCode::kConstraintViolation,
                         "market for quality '" + spec.qualities[z] +
                             "' does not clear");
    }
  }

  double total = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t z = 0; z < nz; ++z) {
      const double mass = mu.supply(x, z);
      if (spec.alpha(x, z) == kNegInf) {
        if (mass > tol) {
          throw HedonicError(ErrorCode::kInfeasibleMass,
                             "mass on forbidden pair (" + spec.producers[x] +
                                 ", " + spec.qualities[z] + ")");
        }
        continue;
      }
      total += mass * spec.alpha(x, z);
    }
  }
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double mass = mu.demand(z, y);
      if (spec.gamma(z, y) == kNegInf) {
        if (mass > tol) {
          throw HedonicError(ErrorCode::kInfeasibleMass,
                             "mass on forbidden pair (" + spec.qualities[z] +
                                 ", " + spec.consumers[y] + ")");
        }
        continue;
      }
      total += mass * spec.gamma(z, y);
    }
  }
  return total;
}

namespace {

// Checks one agent type's choices against its payoffs. payoff[z] may be -inf.
void CheckRationality(Side side, std::size_t type, const Vector& payoff,
                      const Vector& mass_by_quality, double optout_mass,
                      double tol, VerificationReport& report) {
  double best = 0.0;
  std::optional<std::size_t> best_option;
  for (Eigen::Index z = 0; z < payoff.size(); ++z) {
    if (payoff[z] > best) {
      best = payoff[z];
      best_option = static_cast<std::size_t>(z);
    }
  }
  for (Eigen::Index z = 0; z < payoff.size(); ++z) {
    if (mass_by_quality[z] <= tol) continue;
    const double slack = best - payoff[z];
    if (slack > tol) {
      report.rationality_violations.push_back(
          {side, type, static_cast<std::size_t>(z), best_option, slack});
    }
    report.max_residual = std::max(report.max_residual, slack);
  }
  if (optout_mass > tol) {
    if (best > tol) {
      report.rationality_violations.push_back(
          {side, type, std::nullopt, best_option, best});
    }
    report.max_residual = std::max(report.max_residual, best);
  }
}

}  // namespace

VerificationReport verify_equilibrium(const MarketSpec& spec,
                                      const PriceVector& p,
                                      const Allocation& mu, double tol) {
  const std::size_t nx = spec.num_producers();
  const std::size_t ny = spec.num_consumers();
  const std::size_t nz = spec.num_qualities();
  if (static_cast<std::size_t>(p.size()) != nz) {
    throw HedonicError(ErrorCode::kDimensionMismatch,
                       "price vector does not match the quality set");
  }
  CheckShape(mu.supply, nx, nz, "supply allocation");
  CheckShape(mu.demand, nz, ny, "demand allocation");

  VerificationReport report;
  auto note = [&](double residual) {
    report.max_residual = std::max(report.max_residual, residual);
    return residual <= tol;
  };

  const Vector out_x = mu.producer_optout(spec.n);
  const Vector out_y = mu.consumer_optout(spec.m);
  for (std::size_t x = 0; x < nx; ++x) {
    report.people_counting_ok &= note(-out_x[x]);
    report.people_counting_ok &= note(-mu.supply.row(x).minCoeff());
  }
  for (std::size_t y = 0; y < ny; ++y) {
    report.people_counting_ok &= note(-out_y[y]);
    report.people_counting_ok &= note(-mu.demand.col(y).minCoeff());
  }

  for (std::size_t z = 0; z < nz; ++z) {
    const double excess = mu.supply.col(z).sum() - mu.demand.row(z).sum();
    if (spec.free_disposal) {
      report.market_clearing_ok &= note(-excess);
      // Disposal only happens at a zero price.
      if (excess > tol) report.market_clearing_ok &= note(std::abs(p[z]));
    } else {
      report.market_clearing_ok &= note(std::abs(excess));
    }
  }

  for (std::size_t x = 0; x < nx; ++x) {
    Vector payoff(nz);
    for (std::size_t z = 0; z < nz; ++z) {
      payoff[z] = spec.alpha(x, z) == kNegInf ? kNegInf
                                              : spec.alpha(x, z) + p[z];
    }
    CheckRationality(Side::kProducer, x, payoff, mu.supply.row(x).transpose(),
                     out_x[x], tol, report);
  }
  for (std::size_t y = 0; y < ny; ++y) {
    Vector payoff(nz);
    for (std::size_t z = 0; z < nz; ++z) {
      payoff[z] = spec.gamma(z, y) == kNegInf ? kNegInf
                                              : spec.gamma(z, y) - p[z];
    }
    CheckRationality(Side::kConsumer, y, payoff, mu.demand.col(y), out_y[y],
                     tol, report);
  }
  return report;
}

PriceBounds price_bounds(const MarketSpec& spec, const IndirectUtilities& uv) {
  const std::size_t nx = spec.num_producers();
  const std::size_t ny = spec.num_consumers();
  const std::size_t nz = spec.num_qualities();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  PriceBounds bounds{Vector::Constant(nz, -kInf), Vector::Constant(nz, kInf)};
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t y = 0; y < ny; ++y) {
      if (spec.gamma(z, y) == kNegInf) continue;
      bounds.p_min[z] = std::max(bounds.p_min[z], spec.gamma(z, y) - uv.v[y]);
    }
    for (std::size_t x = 0; x < nx; ++x) {
      if (spec.alpha(x, z) == kNegInf) continue;
      bounds.p_max[z] = std::min(bounds.p_max[z], uv.u[x] - spec.alpha(x, z));
    }
  }
  return bounds;
}

IndirectUtilities envelope_utilities(const MarketSpec& spec,
                                     const PriceVector& p) {
  const std::size_t nx = spec.num_producers();
  const std::size_t ny = spec.num_consumers();
  const std::size_t nz = spec.num_qualities();
  IndirectUtilities uv{Vector::Zero(nx), Vector::Zero(ny)};
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t z = 0; z < nz; ++z) {
      if (spec.alpha(x, z) == kNegInf) continue;
      uv.u[x] = std::max(uv.u[x], spec.alpha(x, z) + p[z]);
    }
  }
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t z = 0; z < nz; ++z) {
      if (spec.gamma(z, y) == kNegInf) continue;
      uv.v[y] = std::max(uv.v[y], spec.gamma(z, y) - p[z]);
    }
  }
  return uv;
}

MarketSpec worked_example_market() {
  MarketSpec spec;
  spec.producers = {"x1", "x2", "x3", "x4"};
  spec.consumers = {"y1", "y2", "y3"};
  spec.qualities = {"z1", "z2", "z3"};
  spec.n = Vector::Ones(4);
  spec.m = Vector::Ones(3);
  spec.alpha.resize(4, 3);
  spec.alpha << 2, 5, 3,
                2, 1, 4,
                1, 5, 8,
                4, 2, 4;
  spec.gamma.resize(3, 3);
  spec.gamma << 0, 2, 1,
                2, 4, 2,
                4, 2, 6;
  return spec;
}

}  // namespace hedonic

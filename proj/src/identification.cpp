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

#include "hedonic/identification.hpp"

#include <algorithm>
#include <sstream>

namespace hedonic {
namespace {

void CheckShapes(const ObservedMarket& obs) {
  const Eigen::Index options = obs.shares.supply.cols();
  if (options < 2 || obs.shares.demand.cols() != options ||
      obs.p.size() != options - 1 ||
      obs.shares.supply.rows() != obs.n.size() ||
      obs.shares.demand.rows() != obs.m.size()) {
    std::ostringstream os;
    os << "observed market shapes disagree: supply " << obs.shares.supply.rows()
       << "x" << obs.shares.supply.cols() << ", demand "
       << obs.shares.demand.rows() << "x" << obs.shares.demand.cols()
       << ", |p| = " << obs.p.size() << ", |n| = " << obs.n.size()
       << ", |m| = " << obs.m.size();
    throw HedonicError(ErrorCode::kDimensionMismatch, os.str());
  }
  if (!obs.heterogeneity.logit()) {
    const auto fits = [&](const std::vector<EmpiricalShocks>& draws,
                          Eigen::Index types) {
      return static_cast<Eigen::Index>(draws.size()) == types &&
             std::all_of(draws.begin(), draws.end(), [&](const auto& d) {
               return d.draws.rows() >= 1 && d.draws.cols() == options;
             });
    };
    if (!fits(obs.heterogeneity.producer_draws, obs.n.size()) ||
        !fits(obs.heterogeneity.consumer_draws, obs.m.size())) {
      throw HedonicError(ErrorCode::kDimensionMismatch,
                         "draw matrices do not match the observed market");
    }
  }
}

}  // namespace

IdentifiedUtilities identify_systematic(const ObservedMarket& obs,
                                        const IdentificationOptions& options) {
  CheckShapes(obs);
  const Eigen::Index nz = obs.p.size();
  ConjugateOptions conj;
  conj.method = options.path == IdentificationPath::kLogitClosedForm
                    ? ConjugateMethod::kClosedForm
                    : ConjugateMethod::kNumerical;
  conj.max_iter = options.max_iter;

  IdentifiedUtilities out;
  out.utilities.U.resize(obs.n.size(), nz);
  out.utilities.V.resize(nz, obs.m.size());
  for (Eigen::Index x = 0; x < obs.n.size(); ++x) {
    const ConjugateResult r = conjugate(obs.shares.supply.row(x).transpose(),
                                        obs.heterogeneity.producer(x), conj);
    out.utilities.U.row(x) = r.gradient.transpose();
    out.residual = std::max(out.residual, r.residual);
  }
  for (Eigen::Index y = 0; y < obs.m.size(); ++y) {
    const ConjugateResult r = conjugate(obs.shares.demand.row(y).transpose(),
                                        obs.heterogeneity.consumer(y), conj);
    out.utilities.V.col(y) = r.gradient;
    out.residual = std::max(out.residual, r.residual);
  }
  return out;
}

IdentifiedPrimitives identify_primitives(const ObservedMarket& obs,
                                         const IdentificationOptions& options) {
  IdentifiedUtilities id = identify_systematic(obs, options);
  IdentifiedPrimitives out;
  out.alpha_hat = id.utilities.U.rowwise() - obs.p.transpose();
  out.gamma_hat = id.utilities.V.colwise() + obs.p;
  out.utilities = std::move(id.utilities);
  out.residual = id.residual;
  return out;
}

}  // namespace hedonic

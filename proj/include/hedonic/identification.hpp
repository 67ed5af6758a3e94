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

#ifndef HEDONIC_IDENTIFICATION_HPP_
#define HEDONIC_IDENTIFICATION_HPP_

// Recovery of systematic utilities and surplus tables from observed
// conditional choice shares and hedonic prices.

#include "hedonic/entropy.hpp"
#include "hedonic/market.hpp"

namespace hedonic {

struct ObservedMarket {
  ChoiceProbabilities shares;  // strictly interior rows, opt-out first
  Vector n;
  Vector m;
  PriceVector p;
  HeterogeneitySpec heterogeneity;
};

enum class IdentificationPath {
  kLogitClosedForm,  // log-odds against the opt-out
  kConjugate,        // numerical conjugate gradient
};

struct IdentificationOptions {
  // Empirical heterogeneity always takes the conjugate path.
  IdentificationPath path = IdentificationPath::kLogitClosedForm;
  std::size_t max_iter = 20000;
};

struct IdentifiedUtilities {
  SystematicUtilities utilities;
  // Largest share mismatch of the recovered utilities; zero up to rounding
  // for logit, possibly positive for empirical draws.
  double residual = 0.0;
};

struct IdentifiedPrimitives {
  Table alpha_hat;  // U_hat - p
  Table gamma_hat;  // V_hat + p
  SystematicUtilities utilities;
  double residual = 0.0;
};

// Throws kDimensionMismatch, kNotAProbability, or kBoundarySupport when a
// share is zero.
IdentifiedUtilities identify_systematic(
    const ObservedMarket& obs, const IdentificationOptions& options = {});

IdentifiedPrimitives identify_primitives(
    const ObservedMarket& obs, const IdentificationOptions& options = {});

}  // namespace hedonic

#endif  // HEDONIC_IDENTIFICATION_HPP_

/*
 * Copyright 2026 The deniable-fit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DENIABLE_TRAINING_H_
#define DENIABLE_TRAINING_H_

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "deniable/models.h"
#include "deniable/norms.h"

namespace deniable {

struct TwoNormLoss {};
struct OneNormLoss {};
struct MetricLoss {
  MetricKind kind;
};
struct CraftedLoss {
  CraftedNorm norm;
};
struct CraftedMatrixLoss {
  std::vector<CraftedNorm> norms;  // one per output column
};

// The error-metric part of the training configuration. Standard losses are
// applied to the residual matrix flattened column by column.
using LossSpec = std::variant<TwoNormLoss, OneNormLoss, MetricLoss, CraftedLoss,
                              CraftedMatrixLoss>;

// Throws DimensionMismatch / LengthMismatch if the loss does not fit the
// shape of `residuals`.
double EvaluateLoss(const LossSpec& loss, const Matrix& residuals);
void CheckLossShape(const LossSpec& loss, Eigen::Index n, Eigen::Index k);

struct OptimizerConfig {
  Vector start;
  int max_iters = 20000;
  // Initial simplex edge along coordinate i: simplex_scale * max(1, |start_i|).
  double simplex_scale = 0.05;
  // Stop once f(worst) - f(best) over the simplex drops below this.
  double convergence_tol = 1e-12;
  // Number of times the simplex is rebuilt around the best vertex after
  // converging. A restart that does not lower the best value ends the run.
  int max_restarts = 3;
  std::uint64_t seed = 0;
};

struct FittedModel {
  Vector params;
  double final_loss = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(const Vector&)>;
// Called after every iteration with the current best objective value.
using IterationObserver = std::function<void(int iteration, double best)>;

// Nelder-Mead simplex descent (reflection 1, expansion 2, contraction 1/2,
// shrink 1/2). Non-finite values away from the start are treated as +inf.
FittedModel Minimize(const Objective& objective, const OptimizerConfig& config,
                     const IterationObserver& observer = {});

// Minimizes loss(Residuals(model, data, p)) over p, starting at config.start.
FittedModel Fit(const ParamModel& model, const Dataset& data,
                const LossSpec& loss, const OptimizerConfig& config);

}  // namespace deniable

#endif  // DENIABLE_TRAINING_H_

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

#include "deniable/training.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "deniable/error.h"

namespace deniable {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double SafeEval(const Objective& objective, const Vector& p) {
  const double value = objective(p);
  return std::isfinite(value) ? value : kInf;
}

struct Simplex {
  std::vector<Vector> points;
  std::vector<double> values;

  void Sort() {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    // Stable so ties keep their position; needed for bit-exact replays.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] < values[b];
    });
    std::vector<Vector> p;
    std::vector<double> v;
    for (auto i : order) {
      p.push_back(std::move(points[i]));
      v.push_back(values[i]);
    }
    points = std::move(p);
    values = std::move(v);
  }

  double Spread() const { return values.back() - values.front(); }
};

Simplex InitialSimplex(const Objective& objective, const Vector& center,
                       double center_value, double scale) {
  Simplex s;
  s.points.push_back(center);
  s.values.push_back(center_value);
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    Vector vertex = center;
    vertex(i) += scale * std::max(1.0, std::abs(center(i)));
    s.values.push_back(SafeEval(objective, vertex));
    s.points.push_back(std::move(vertex));
  }
  s.Sort();
  return s;
}

}  // namespace

void CheckLossShape(const LossSpec& loss, Eigen::Index n, Eigen::Index k) {
  std::visit(
      Overloaded{
          [](const TwoNormLoss&) {}, [](const OneNormLoss&) {},
          [](const MetricLoss&) {},
          [&](const CraftedLoss& l) {
            if (k != 1 || l.norm.dim() != n) {
              throw Error(ErrorCode::kDimensionMismatch,
                          "crafted norm of dimension " +
                              std::to_string(l.norm.dim()) + " for " +
                              std::to_string(n) + "x" + std::to_string(k) +
                              " residuals");
            }
          },
          [&](const CraftedMatrixLoss& l) {
            if (static_cast<Eigen::Index>(l.norms.size()) != k) {
              throw Error(ErrorCode::kLengthMismatch,
                          std::to_string(l.norms.size()) + " norms for " +
                              std::to_string(k) + " output columns");
            }
            for (const auto& norm : l.norms) {
              if (norm.dim() != n) {
                throw Error(ErrorCode::kDimensionMismatch,
                            "crafted norm dimension does not match n");
              }
            }
          },
      },
      loss);
}

double EvaluateLoss(const LossSpec& loss, const Matrix& residuals) {
  CheckLossShape(loss, residuals.rows(), residuals.cols());
  const Eigen::Map<const Vector> flat(residuals.data(), residuals.size());
  return std::visit(
      Overloaded{
          [&](const TwoNormLoss&) { return flat.norm(); },
          [&](const OneNormLoss&) { return flat.lpNorm<1>(); },
          [&](const MetricLoss& l) {
            return StandardMetric(l.kind, flat, Vector::Zero(flat.size()));
          },
          [&](const CraftedLoss& l) {
            return CraftedNormValue(l.norm, residuals.col(0));
          },
          [&](const CraftedMatrixLoss& l) {
            return CraftedMatrixNorm(l.norms, residuals);
          },
      },
      loss);
}

FittedModel Minimize(const Objective& objective, const OptimizerConfig& config,
                     const IterationObserver& observer) {
  if (config.max_iters < 1 || !(config.convergence_tol > 0.0) ||
      !(config.simplex_scale > 0.0) || config.max_restarts < 0) {
    throw Error(ErrorCode::kInvalidArguments, "optimizer configuration");
  }
  if (config.start.size() < 1) {
    throw Error(ErrorCode::kInvalidArguments, "empty start point");
  }
  const double start_value = objective(config.start);
  if (!std::isfinite(start_value)) {
    throw Error(ErrorCode::kNonFiniteObjective,
                "objective is not finite at the start point");
  }

  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  const std::size_t d = static_cast<std::size_t>(config.start.size());
  Simplex s = InitialSimplex(objective, config.start, start_value,
                             config.simplex_scale);
  int iter = 0;
  int restarts = 0;
  bool converged = false;
  double best_before_restart = kInf;

  while (true) {
    if (s.Spread() < config.convergence_tol) {
      // Restart from the best vertex; stop when that no longer helps.
      if (restarts >= config.max_restarts ||
          !(s.values.front() < best_before_restart)) {
        converged = true;
        break;
      }
      best_before_restart = s.values.front();
      ++restarts;
      s = InitialSimplex(objective, s.points.front(), s.values.front(),
                         config.simplex_scale);
      continue;
    }
    if (iter >= config.max_iters) break;
    ++iter;

    Vector centroid = Vector::Zero(config.start.size());
    for (std::size_t i = 0; i < d; ++i) centroid += s.points[i];
    centroid /= static_cast<double>(d);
    const Vector& worst = s.points[d];
    const double f_worst = s.values[d];

    const Vector reflected = centroid + kReflect * (centroid - worst);
    const double f_reflected = SafeEval(objective, reflected);

    bool shrink = false;
    if (f_reflected < s.values[0]) {
      const Vector expanded = centroid + kExpand * (centroid - worst);
      const double f_expanded = SafeEval(objective, expanded);
      if (f_expanded < f_reflected) {
        s.points[d] = expanded;
        s.values[d] = f_expanded;
      } else {
        s.points[d] = reflected;
        s.values[d] = f_reflected;
      }
    } else if (f_reflected < s.values[d - 1]) {
      s.points[d] = reflected;
      s.values[d] = f_reflected;
    } else if (f_reflected < f_worst) {
      const Vector outside = centroid + kContract * (reflected - centroid);
      const double f_outside = SafeEval(objective, outside);
      if (f_outside <= f_reflected) {
        s.points[d] = outside;
        s.values[d] = f_outside;
      } else {
        shrink = true;
      }
    } else {
      const Vector inside = centroid + kContract * (worst - centroid);
      const double f_inside = SafeEval(objective, inside);
      if (f_inside < f_worst) {
        s.points[d] = inside;
        s.values[d] = f_inside;
      } else {
        shrink = true;
      }
    }

    if (shrink) {
      for (std::size_t i = 1; i <= d; ++i) {
        s.points[i] = s.points[0] + kShrink * (s.points[i] - s.points[0]);
        s.values[i] = SafeEval(objective, s.points[i]);
      }
    }
    s.Sort();
    if (observer) observer(iter, s.values.front());
  }

  FittedModel out;
  out.params = s.points.front();
  out.final_loss = s.values.front();
  out.iterations = iter;
  out.converged = converged;
  return out;
}

FittedModel Fit(const ParamModel& model, const Dataset& data,
                const LossSpec& loss, const OptimizerConfig& config) {
  CheckLossShape(loss, data.size(), data.output_dim());
  if (config.start.size() != model.param_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "start point has " + std::to_string(config.start.size()) +
                    " entries, model has d = " +
                    std::to_string(model.param_dim()));
  }
  if (data.input_dim() != model.input_dim() ||
      data.output_dim() != model.output_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "model does not match dataset");
  }
  auto objective = [&](const Vector& p) {
    try {
      return EvaluateLoss(loss, Residuals(model, data, p));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNonFiniteValue) return kInf;
      throw;
    }
  };
  return Minimize(objective, config);
}

}  // namespace deniable

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

#ifndef DENIABLE_MODELS_H_
#define DENIABLE_MODELS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "deniable/linalg.h"

namespace deniable {

// n records of (x_i in R^m, y_i in R^k), stored row-wise.
class Dataset {
 public:
  Dataset(Matrix inputs, Matrix responses);

  const Matrix& inputs() const { return inputs_; }
  const Matrix& responses() const { return responses_; }
  Eigen::Index size() const { return inputs_.rows(); }
  Eigen::Index input_dim() const { return inputs_.cols(); }
  Eigen::Index output_dim() const { return responses_.cols(); }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.inputs_ == b.inputs_ && a.responses_ == b.responses_;
  }

 private:
  Matrix inputs_;
  Matrix responses_;
};

// A parameterized family f(x, p): R^m x R^d -> R^k. Evaluate must be
// reentrant and deterministic.
class ParamModel {
 public:
  virtual ~ParamModel() = default;

  virtual Eigen::Index param_dim() const = 0;
  virtual Eigen::Index input_dim() const = 0;
  virtual Eigen::Index output_dim() const = 0;

  virtual Vector Evaluate(const Vector& x, const Vector& p) const = 0;

  // n x d matrix of gradients of f_j w.r.t. p, if known in closed form.
  virtual std::optional<Matrix> AnalyticJacobian(const Dataset& data,
                                                 const Vector& p,
                                                 Eigen::Index output_index) const {
    (void)data;
    (void)p;
    (void)output_index;
    return std::nullopt;
  }

  // Short identifier written into certificates ("linear", ...).
  virtual std::string kind() const = 0;
};

// f(x, p) = beta_0 + sum_j beta_j x_j, scalar output, d = m + 1.
class LinearRegressionModel final : public ParamModel {
 public:
  explicit LinearRegressionModel(Eigen::Index input_dim);

  Eigen::Index param_dim() const override { return input_dim_ + 1; }
  Eigen::Index input_dim() const override { return input_dim_; }
  Eigen::Index output_dim() const override { return 1; }
  Vector Evaluate(const Vector& x, const Vector& p) const override;
  // [1 | X], independent of p.
  std::optional<Matrix> AnalyticJacobian(const Dataset& data, const Vector& p,
                                         Eigen::Index output_index) const override;
  std::string kind() const override { return "linear"; }

 private:
  Eigen::Index input_dim_;
};

// Model backed by an arbitrary callable; used for nonlinear and multi-output
// families that have no closed-form Jacobian.
class FunctionModel final : public ParamModel {
 public:
  using Evaluator = std::function<Vector(const Vector& x, const Vector& p)>;

  FunctionModel(Eigen::Index param_dim, Eigen::Index input_dim,
                Eigen::Index output_dim, Evaluator evaluator,
                std::string kind = "function");

  Eigen::Index param_dim() const override { return param_dim_; }
  Eigen::Index input_dim() const override { return input_dim_; }
  Eigen::Index output_dim() const override { return output_dim_; }
  Vector Evaluate(const Vector& x, const Vector& p) const override;
  std::string kind() const override { return kind_; }

 private:
  Eigen::Index param_dim_;
  Eigen::Index input_dim_;
  Eigen::Index output_dim_;
  Evaluator evaluator_;
  std::string kind_;
};

// n x k matrix of model outputs f(x_i, p).
Matrix Predictions(const ParamModel& model, const Dataset& data,
                   const Vector& p);

// E[i][j] = Y[i][j] - f_j(x_i, p).
Matrix Residuals(const ParamModel& model, const Dataset& data, const Vector& p);

enum class JacobianMethod { kAuto, kAnalytic, kFiniteDifference };

// Forward-difference step for parameter coordinate l.
inline double FiniteDifferenceStep(double p_l) {
  return 1e-6 * std::max(1.0, std::abs(p_l));
}

// Row i holds the gradient of f_j(x_i, .) at p. kAuto prefers the analytic
// Jacobian and falls back to forward differences.
Matrix Jacobian(const ParamModel& model, const Dataset& data, const Vector& p,
                Eigen::Index output_index = 0,
                JacobianMethod method = JacobianMethod::kAuto);

// Bits of the canonical parameter encoding: one IEEE-754 double per
// parameter plus a 128-bit header.
std::uint64_t SerializedBitLength(const ParamModel& model, const Vector& p);
std::uint64_t SerializedBitLength(Eigen::Index param_dim);

}  // namespace deniable

#endif  // DENIABLE_MODELS_H_

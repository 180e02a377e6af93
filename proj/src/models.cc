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

#include "deniable/models.h"

#include <cmath>
#include <string>
#include <utility>

#include "deniable/error.h"

namespace deniable {
namespace {

void CheckModelData(const ParamModel& model, const Dataset& data,
                    const Vector& p) {
  if (data.input_dim() != model.input_dim() ||
      data.output_dim() != model.output_dim() || p.size() != model.param_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model (d=" + std::to_string(model.param_dim()) +
                    ", m=" + std::to_string(model.input_dim()) +
                    ", k=" + std::to_string(model.output_dim()) +
                    ") does not match data (m=" +
                    std::to_string(data.input_dim()) +
                    ", k=" + std::to_string(data.output_dim()) +
                    ") and p (d=" + std::to_string(p.size()) + ")");
  }
}

Vector EvaluateChecked(const ParamModel& model, const Vector& x,
                       const Vector& p) {
  Vector out = model.Evaluate(x, p);
  if (out.size() != model.output_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model returned " + std::to_string(out.size()) +
                    " outputs, expected " + std::to_string(model.output_dim()));
  }
  if (!out.allFinite()) {
    throw Error(ErrorCode::kNonFiniteValue, "model returned NaN or infinity");
  }
  return out;
}

}  // namespace

Dataset::Dataset(Matrix inputs, Matrix responses)
    : inputs_(std::move(inputs)), responses_(std::move(responses)) {
  if (inputs_.rows() < 1) {
    throw Error(ErrorCode::kEmptyInput, "dataset needs at least one record");
  }
  if (inputs_.rows() != responses_.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "inputs have " + std::to_string(inputs_.rows()) +
                    " rows, responses " + std::to_string(responses_.rows()));
  }
  if (responses_.cols() < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "dataset needs a response column");
  }
}

LinearRegressionModel::LinearRegressionModel(Eigen::Index input_dim)
    : input_dim_(input_dim) {
  if (input_dim < 0) {
    throw Error(ErrorCode::kInvalidArguments, "negative input dimension");
  }
}

Vector LinearRegressionModel::Evaluate(const Vector& x, const Vector& p) const {
  if (x.size() != input_dim_ || p.size() != input_dim_ + 1) {
    throw Error(ErrorCode::kDimensionMismatch, "linear model arguments");
  }
  Vector out(1);
  out(0) = p(0) + p.tail(input_dim_).dot(x);
  return out;
}

std::optional<Matrix> LinearRegressionModel::AnalyticJacobian(
    const Dataset& data, const Vector& p, Eigen::Index output_index) const {
  CheckModelData(*this, data, p);
  if (output_index != 0) {
    throw Error(ErrorCode::kDimensionMismatch, "linear model has one output");
  }
  Matrix jac(data.size(), param_dim());
  jac.col(0).setOnes();
  jac.rightCols(input_dim_) = data.inputs();
  return jac;
}

FunctionModel::FunctionModel(Eigen::Index param_dim, Eigen::Index input_dim,
                             Eigen::Index output_dim, Evaluator evaluator,
                             std::string kind)
    : param_dim_(param_dim),
      input_dim_(input_dim),
      output_dim_(output_dim),
      evaluator_(std::move(evaluator)),
      kind_(std::move(kind)) {
  if (param_dim < 1 || input_dim < 0 || output_dim < 1) {
    throw Error(ErrorCode::kInvalidArguments, "model dimensions");
  }
}

Vector FunctionModel::Evaluate(const Vector& x, const Vector& p) const {
  if (!evaluator_) throw Error(ErrorCode::kNoEvaluator, "model has no evaluator");
  return evaluator_(x, p);
}

Matrix Predictions(const ParamModel& model, const Dataset& data,
                   const Vector& p) {
  CheckModelData(model, data, p);
  Matrix out(data.size(), model.output_dim());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out.row(i) = EvaluateChecked(model, data.inputs().row(i).transpose(), p)
                     .transpose();
  }
  return out;
}

Matrix Residuals(const ParamModel& model, const Dataset& data, const Vector& p) {
  return data.responses() - Predictions(model, data, p);
}

Matrix Jacobian(const ParamModel& model, const Dataset& data, const Vector& p,
                Eigen::Index output_index, JacobianMethod method) {
  CheckModelData(model, data, p);
  if (output_index < 0 || output_index >= model.output_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "output index " + std::to_string(output_index) + " out of range");
  }
  if (method != JacobianMethod::kFiniteDifference) {
    if (auto analytic = model.AnalyticJacobian(data, p, output_index)) {
      return *std::move(analytic);
    }
    if (method == JacobianMethod::kAnalytic) {
      throw Error(ErrorCode::kNoEvaluator, "model has no analytic Jacobian");
    }
  }

  const Eigen::Index d = p.size();
  Matrix jac(data.size(), d);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const Vector x = data.inputs().row(i).transpose();
    const double base = EvaluateChecked(model, x, p)(output_index);
    for (Eigen::Index l = 0; l < d; ++l) {
      Vector shifted = p;
      shifted(l) += FiniteDifferenceStep(p(l));
      const double h = shifted(l) - p(l);
      jac(i, l) = (EvaluateChecked(model, x, shifted)(output_index) - base) / h;
    }
  }
  return jac;
}

std::uint64_t SerializedBitLength(Eigen::Index param_dim) {
  return 64u * static_cast<std::uint64_t>(param_dim) + 128u;
}

std::uint64_t SerializedBitLength(const ParamModel& model, const Vector& p) {
  if (p.size() != model.param_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "parameter vector length");
  }
  return SerializedBitLength(p.size());
}

}  // namespace deniable

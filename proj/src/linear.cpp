// Copyright 2026 The nrkpi Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nrkpi/linear.hpp"

#include <cmath>
#include <vector>

#include "nrkpi/errors.hpp"

namespace nrkpi {

namespace {

// In-place Cholesky solve of A x = b for symmetric positive definite A
// (dimension m). Returns false when a pivot collapses.
bool cholesky_solve(std::vector<double> a, std::vector<double> b,
                    std::size_t m, std::vector<double>& x) {
  // Relative pivot floor: anything at rounding-noise scale counts as
  // singular rather than as information.
  double max_diag = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    max_diag = std::max(max_diag, std::fabs(a[i * m + i]));
  const double tol = std::max(max_diag, 1.0) * 1e-12;

  for (std::size_t k = 0; k < m; ++k) {
    double pivot = a[k * m + k];
    for (std::size_t j = 0; j < k; ++j) pivot -= a[k * m + j] * a[k * m + j];
    if (!(pivot > tol)) return false;
    const double root = std::sqrt(pivot);
    a[k * m + k] = root;
    for (std::size_t i = k + 1; i < m; ++i) {
      double v = a[i * m + k];
      for (std::size_t j = 0; j < k; ++j) v -= a[i * m + j] * a[k * m + j];
      a[i * m + k] = v / root;
    }
  }

  // Forward then backward substitution with the factor L (row-major lower).
  for (std::size_t i = 0; i < m; ++i) {
    double v = b[i];
    for (std::size_t j = 0; j < i; ++j) v -= a[i * m + j] * b[j];
    b[i] = v / a[i * m + i];
  }
  x.assign(m, 0.0);
  for (std::size_t ii = m; ii-- > 0;) {
    double v = b[ii];
    for (std::size_t j = ii + 1; j < m; ++j) v -= a[j * m + ii] * x[j];
    x[ii] = v / a[ii * m + ii];
  }
  return true;
}

}  // namespace

LinearCore fit_linear(const Matrix& X, std::span<const double> y) {
  if (X.n_rows != y.size())
    throw LengthMismatch("fit_linear: matrix rows and target length differ");
  if (X.n_rows == 0) throw EmptyTrace("fit_linear on empty matrix");

  const std::size_t n = X.n_rows;
  const std::size_t p = X.n_cols;
  const std::size_t m = p + 1;  // weights plus intercept

  // Normal equations over the intercept-augmented design.
  std::vector<double> a(m * m, 0.0);
  std::vector<double> b(m, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = X.row(r);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i; j < p; ++j) a[i * m + j] += row[i] * row[j];
      a[i * m + p] += row[i];
      b[i] += row[i] * y[r];
    }
    b[p] += y[r];
  }
  a[p * m + p] = static_cast<double>(n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) a[i * m + j] = a[j * m + i];
  }

  LinearCore core;
  std::vector<double> solution;
  if (!cholesky_solve(a, b, m, solution)) {
    core.condition_warning = true;
    std::vector<double> ridged = a;
    for (std::size_t i = 0; i < m; ++i) ridged[i * m + i] += 1e-8;
    if (!cholesky_solve(std::move(ridged), b, m, solution)) {
      // With a positive diagonal shift this only happens on pathological
      // input scales; grow the shift until the factorization goes through.
      double lambda = 1e-8;
      bool solved = false;
      while (!solved && lambda < 1.0) {
        lambda *= 10.0;
        ridged = a;
        for (std::size_t i = 0; i < m; ++i) ridged[i * m + i] += lambda;
        solved = cholesky_solve(std::move(ridged), b, m, solution);
      }
      if (!solved) throw ConfigError("linear system could not be stabilized");
    }
  }

  core.weights.assign(solution.begin(), solution.begin() + static_cast<std::ptrdiff_t>(p));
  core.intercept = solution[p];
  for (const double w : core.weights) {
    if (!std::isfinite(w)) throw ConfigError("non-finite linear coefficients");
  }
  return core;
}

double predict_linear(const LinearCore& core, const double* row,
                      std::size_t p) {
  double acc = core.intercept;
  for (std::size_t j = 0; j < p; ++j) acc += core.weights[j] * row[j];
  return acc;
}

}  // namespace nrkpi

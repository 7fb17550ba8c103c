// Copyright 2026 The qdb developers
//
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

#include "qdb/state.hpp"

#include <algorithm>
#include <cmath>

namespace qdb {

DensityMatrix DensityMatrix::make(const Mat& sigma, const Tolerances& tol) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 2)
    throw InvalidState("DensityMatrix: need a square matrix with N >= 2");
  if (!is_hermitian_matrix(sigma, tol))
    throw InvalidState("DensityMatrix: sigma is not Hermitian");
  const HermEig eig = hermitian_eig(sigma, tol);
  const int n = static_cast<int>(sigma.rows());
  if (std::abs(eig.eigenvalues.sum() - 1.0) > 1e-12 * n)
    throw InvalidState("DensityMatrix: trace must be 1");
  if (eig.eigenvalues(n - 1) <= 0.0)
    throw InvalidState("DensityMatrix: sigma must be positive definite");
  DensityMatrix d;
  d.n_ = n;
  d.sigma_ = (sigma + sigma.adjoint()) / 2.0;
  d.lambda_ = eig.eigenvalues;
  d.u_ = eig.eigenvectors;
  return d;
}

DensityMatrix DensityMatrix::diagonal(const RVec& lambda, const Tolerances& tol) {
  Mat sigma = Mat::Zero(lambda.size(), lambda.size());
  for (int j = 0; j < lambda.size(); ++j) sigma(j, j) = lambda(j);
  return make(sigma, tol);
}

Measure Measure::gns() { return make({{0.0, 1.0}}, 0.0); }
Measure Measure::kms() { return make({{0.5, 1.0}}, 0.0); }
Measure Measure::bkm() { return make({}, 1.0); }
Measure Measure::delta(double s) { return make({{s, 1.0}}, 0.0); }
Measure Measure::ms(double s) {
  if (std::abs(s - 0.5) < 1e-15) return kms();
  return make({{s, 0.5}, {1.0 - s, 0.5}}, 0.0);
}

Measure Measure::make(std::vector<Atom> atoms, double uniform_weight) {
  Measure m;
  m.atoms = std::move(atoms);
  m.uniform_weight = uniform_weight;
  m.validate();
  return m;
}

void Measure::validate() const {
  double total = uniform_weight;
  if (uniform_weight < 0.0)
    throw InvalidMeasure("Measure: uniform weight must be >= 0");
  for (const Atom& a : atoms) {
    if (a.s < 0.0 || a.s > 1.0)
      throw InvalidMeasure("Measure: atom location outside [0,1]");
    if (a.w <= 0.0) throw InvalidMeasure("Measure: atom weight must be > 0");
    total += a.w;
  }
  for (size_t i = 0; i < atoms.size(); ++i)
    for (size_t j = i + 1; j < atoms.size(); ++j)
      if (std::abs(atoms[i].s - atoms[j].s) < 1e-15)
        throw InvalidMeasure("Measure: atom locations must be distinct");
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidMeasure("Measure: weights must sum to 1");
}

bool is_even(const Measure& m) {
  m.validate();
  for (const Measure::Atom& a : m.atoms) {
    const double mirror = 1.0 - a.s;
    bool found = false;
    for (const Measure::Atom& b : m.atoms) {
      if (std::abs(b.s - mirror) < 1e-12 && std::abs(b.w - a.w) < 1e-12) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

double log_mean(double x, double y) {
  if (x <= 0.0 || y <= 0.0)
    throw NonPositiveInput("log_mean: arguments must be positive");
  const double lx = std::log(x), ly = std::log(y);
  const double h = 0.5 * (lx - ly);
  if (std::abs(lx - ly) < 1e-14) {
    // Symmetric series sqrt(xy) * sinh(h)/h, three terms.
    return std::sqrt(x * y) * (1.0 + h * h / 6.0 + h * h * h * h / 120.0);
  }
  return (x - y) / (lx - ly);
}

double weighted_mean(double x, double y, const Measure& m) {
  if (x <= 0.0 || y <= 0.0)
    throw NonPositiveInput("weighted_mean: arguments must be positive");
  double acc = 0.0;
  for (const Measure::Atom& a : m.atoms)
    acc += a.w * std::pow(x, a.s) * std::pow(y, 1.0 - a.s);
  if (m.uniform_weight > 0.0) acc += m.uniform_weight * log_mean(x, y);
  return acc;
}

RMat mean_kernel(const DensityMatrix& sigma, const Measure& m) {
  const int n = sigma.dim();
  RMat k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k(i, j) = weighted_mean(sigma.lambda()(i), sigma.lambda()(j), m);
  return k;
}

namespace {

Mat entrywise_in_eigenbasis(const DensityMatrix& sigma, const Mat& a,
                            const RMat& kernel) {
  if (a.rows() != sigma.dim() || a.cols() != sigma.dim())
    throw DimensionMismatch("matrix dimension does not match state");
  const Mat ah = sigma.to_eigenbasis(a);
  return sigma.from_eigenbasis(ah.cwiseProduct(kernel.cast<Cplx>()));
}

}  // namespace

Mat apply_Mm(const DensityMatrix& sigma, const Measure& m, const Mat& a) {
  return entrywise_in_eigenbasis(sigma, a, mean_kernel(sigma, m));
}

Mat apply_Mm_inverse(const DensityMatrix& sigma, const Measure& m, const Mat& a) {
  return entrywise_in_eigenbasis(sigma, a, mean_kernel(sigma, m).cwiseInverse());
}

Mat modular_power(const DensityMatrix& sigma, double t, const Mat& a) {
  const int n = sigma.dim();
  RMat k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k(i, j) = std::pow(sigma.lambda()(i) / sigma.lambda()(j), t);
  return entrywise_in_eigenbasis(sigma, a, k);
}

PsdResult lambda_kernel_psd(const DensityMatrix& sigma, const Measure& m,
                            bool inverted, const Tolerances& tol) {
  RMat k = mean_kernel(sigma, m);
  if (inverted) k = k.cwiseInverse();
  return is_psd(k.cast<Cplx>(), tol);
}

Cplx inner_m(const DensityMatrix& sigma, const Measure& m, const Mat& b,
             const Mat& a) {
  return (b.adjoint() * apply_Mm(sigma, m, a)).trace();
}

Cplx inner_h(const Mat& b, const Mat& a) {
  return (b.adjoint() * a).trace() / static_cast<double>(a.rows());
}

}  // namespace qdb

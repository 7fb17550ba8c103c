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

#ifndef QDB_STATE_HPP
#define QDB_STATE_HPP

#include <vector>

#include "qdb/linalg.hpp"

namespace qdb {

struct NonPositiveInput : Error {
  explicit NonPositiveInput(const std::string& what) : Error(what) {}
};
struct InvalidState : Error {
  explicit InvalidState(const std::string& what) : Error(what) {}
};
struct InvalidMeasure : Error {
  explicit InvalidMeasure(const std::string& what) : Error(what) {}
};

/// Faithful state sigma with its spectral decomposition cached.
/// Eigenvalues are sorted descending; eigenvector columns are phase-fixed.
/// All weighted-mean arithmetic happens entrywise in this eigenbasis.
class DensityMatrix {
 public:
  /// Validates: Hermitian, positive definite, unit trace.
  static DensityMatrix make(const Mat& sigma, const Tolerances& tol = {});

  /// Convenience: diagonal state from eigenvalues (must sum to 1).
  static DensityMatrix diagonal(const RVec& lambda, const Tolerances& tol = {});

  int dim() const { return n_; }
  const Mat& sigma() const { return sigma_; }
  const RVec& lambda() const { return lambda_; }
  const Mat& eigenvectors() const { return u_; }

  /// Transform into / out of the sigma eigenbasis.
  Mat to_eigenbasis(const Mat& a) const { return u_.adjoint() * a * u_; }
  Mat from_eigenbasis(const Mat& a) const { return u_ * a * u_.adjoint(); }

 private:
  DensityMatrix() = default;
  int n_ = 0;
  Mat sigma_;
  RVec lambda_;
  Mat u_;
};

/// Probability measure on [0,1]: weighted atoms plus an optional uniform
/// (Lebesgue) component. Weights sum to 1.
struct Measure {
  struct Atom {
    double s = 0.0;
    double w = 0.0;
  };
  std::vector<Atom> atoms;
  double uniform_weight = 0.0;

  static Measure gns();                  // atom at 0
  static Measure kms();                  // atom at 1/2
  static Measure bkm();                  // uniform
  static Measure delta(double s);        // atom at s
  static Measure ms(double s);           // (delta_s + delta_{1-s}) / 2
  static Measure make(std::vector<Atom> atoms, double uniform_weight);

  void validate() const;
};

/// True iff the measure is invariant under s -> 1-s.
bool is_even(const Measure& m);

/// Weighted mean (x, y)_m = sum_k w_k x^{s_k} y^{1-s_k} + u * Lmean(x, y),
/// with Lmean the logarithmic mean. Throws NonPositiveInput.
double weighted_mean(double x, double y, const Measure& m);

/// Logarithmic mean with removable singularity at x = y.
double log_mean(double x, double y);

/// Entrywise kernel matrix K(j,k) = (lambda_j, lambda_k)_m.
RMat mean_kernel(const DensityMatrix& sigma, const Measure& m);

/// M_m(A): multiply entry (j,k) by (lambda_j, lambda_k)_m in the eigenbasis.
Mat apply_Mm(const DensityMatrix& sigma, const Measure& m, const Mat& a);

/// M_m^{-1}(A): divide entry (j,k) by (lambda_j, lambda_k)_m.
Mat apply_Mm_inverse(const DensityMatrix& sigma, const Measure& m, const Mat& a);

/// sigma^t A sigma^{-t}: multiply entry (j,k) by (lambda_j / lambda_k)^t.
Mat modular_power(const DensityMatrix& sigma, double t, const Mat& a);

/// PSD status of the mean kernel (inverted=false) or of its entrywise
/// reciprocal (inverted=true). Equals complete positivity of M_m resp.
/// M_m^{-1} acting as an entrywise multiplier in the sigma eigenbasis.
PsdResult lambda_kernel_psd(const DensityMatrix& sigma, const Measure& m,
                            bool inverted, const Tolerances& tol = {});

/// Inner product <B, A>_m = Tr[B* M_m(A)].
Cplx inner_m(const DensityMatrix& sigma, const Measure& m, const Mat& b,
             const Mat& a);

/// Normalized Hilbert-Schmidt inner product <B, A> = Tr[B* A] / N.
Cplx inner_h(const Mat& b, const Mat& a);

}  // namespace qdb

#endif  // QDB_STATE_HPP

/* Copyright 2026 The ionphoton Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <Eigen/Dense>

namespace ionphoton::linalg {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k pairs with values(k)
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
///
/// Intended for the small (N <= 8) dense Hessians of an ion chain. Sweeps
/// until the off-diagonal Frobenius norm drops below `rel_tol` times the
/// norm of the input. Eigenvalues come back sorted ascending. Each
/// eigenvector is signed so that its largest-magnitude component is
/// positive (ties resolved toward the lowest index), which makes the
/// output deterministic.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd &a, double rel_tol = 1e-15,
                            int max_sweeps = 100);

}  // namespace ionphoton::linalg

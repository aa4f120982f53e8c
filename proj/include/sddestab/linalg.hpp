/*
   Copyright 2026 The sddestab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <Eigen/Dense>

namespace sddestab {

/// Largest eigenvalue of a Hermitian matrix by cyclic Jacobi rotations on its
/// real symmetric embedding [[Re, -Im], [Im, Re]]. Sweeps stop once the
/// off-diagonal Frobenius mass falls below `tol`.
double hermitian_max_eigenvalue(const Eigen::MatrixXcd& h, double tol = 1e-12);

// Largest eigenvalue of (A^* + A)/2.
double symmetric_part_max_eigenvalue(const Eigen::MatrixXcd& a);

}  // namespace sddestab

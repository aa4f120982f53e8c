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

#include "sddestab/linalg.hpp"

#include <cmath>

#include "sddestab/types.hpp"

namespace sddestab {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& s) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.cols(); ++j)
            if (i != j) sum += s(i, j) * s(i, j);
    return std::sqrt(sum);
}

}  // namespace

double hermitian_max_eigenvalue(const Eigen::MatrixXcd& h, double tol) {
    if (h.rows() != h.cols() || h.rows() == 0)
        throw ParameterError("eigenvalue solver needs a nonempty square matrix");
    const Eigen::Index n = h.rows();

    // Each eigenvalue of h appears twice in the embedding.
    Eigen::MatrixXd s(2 * n, 2 * n);
    s.topLeftCorner(n, n) = h.real();
    s.bottomRightCorner(n, n) = h.real();
    s.topRightCorner(n, n) = -h.imag();
    s.bottomLeftCorner(n, n) = h.imag();
    s = 0.5 * (s + s.transpose()).eval();

    const Eigen::Index m = 2 * n;
    const double scale = std::max(1.0, s.norm());
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (off_diagonal_norm(s) <= tol * scale) break;
        for (Eigen::Index p = 0; p < m - 1; ++p) {
            for (Eigen::Index q = p + 1; q < m; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (Eigen::Index k = 0; k < m; ++k) {
                    const double skp = s(k, p);
                    const double skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (Eigen::Index k = 0; k < m; ++k) {
                    const double spk = s(p, k);
                    const double sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }
    return s.diagonal().maxCoeff();
}

double symmetric_part_max_eigenvalue(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw ParameterError("A1 must be square");
    Eigen::MatrixXcd herm = 0.5 * (a.adjoint() + a);
    return hermitian_max_eigenvalue(herm);
}

}  // namespace sddestab

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace otfs {

/// In-place Cholesky A = U^H U of a Hermitian positive-definite matrix stored
/// densely (column-major), restricted to the column envelope of its upper
/// triangle. Column j is taken to be zero above its first nonzero entry; the
/// factor never fills outside that envelope, so a cyclically banded matrix
/// costs O(n b^2 + b n^2) instead of O(n^3). Only the upper triangle of `a`
/// is read and overwritten by U.
///
/// Returns ln det(a). Throws NumericalError naming the failing pivot when the
/// matrix is not numerically positive definite.
double envelope_cholesky_logdet(Eigen::MatrixXcd& a);

}  // namespace otfs

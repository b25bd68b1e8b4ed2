// SPDX-License-Identifier: Apache-2.0
#include "otfs/envelope_cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "otfs/errors.hpp"

namespace otfs {

double envelope_cholesky_logdet(Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw NumericalError("envelope_cholesky: matrix is not square");

  std::vector<Eigen::Index> first(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index i = 0;
    while (i < j && a(i, j) == std::complex<double>(0.0, 0.0)) ++i;
    first[static_cast<std::size_t>(j)] = i;
  }

  double logdet = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index fj = first[static_cast<std::size_t>(j)];
    std::complex<double>* col_j = &a(0, j);
    for (Eigen::Index i = fj; i < j; ++i) {
      const std::complex<double>* col_i = &a(0, i);
      const Eigen::Index start = std::max(fj, first[static_cast<std::size_t>(i)]);
      std::complex<double> s = col_j[i];
      for (Eigen::Index k = start; k < i; ++k) s -= std::conj(col_i[k]) * col_j[k];
      col_j[i] = s / col_i[i].real();
    }
    double d = col_j[j].real();
    for (Eigen::Index k = fj; k < j; ++k) d -= std::norm(col_j[k]);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NumericalError("envelope_cholesky: non-positive pivot " + std::to_string(d) +
                           " at column " + std::to_string(j) + " of " + std::to_string(n) +
                           " (envelope starts at row " + std::to_string(fj) + ")");
    }
    const double root = std::sqrt(d);
    col_j[j] = root;
    logdet += 2.0 * std::log(root);
  }
  return logdet;
}

}  // namespace otfs

// SPDX-License-Identifier: Apache-2.0
#include "ubmc/fem1d.hpp"

#include <algorithm>
#include <cmath>

#include "ubmc/error.hpp"

namespace ubmc {

Dvec solve_tridiagonal(const Dvec& diag, const Dvec& off, const Dvec& rhs) {
  const auto n = diag.size();
  if (n == 0) return Dvec();
  if (rhs.size() != n || off.size() != std::max<Eigen::Index>(n - 1, 0)) {
    throw Error(ErrorKind::InvalidDimension, "tridiagonal system sizes disagree");
  }
  Dvec c(n);
  Dvec d(n);
  double pivot = diag[0];
  if (!(pivot > 0.0)) throw Error(ErrorKind::LostCoercivity, "non-positive pivot in tridiagonal solve");
  if (n > 1) c[0] = off[0] / pivot;
  d[0] = rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = diag[i] - off[i - 1] * c[i - 1];
    if (!(pivot > 0.0)) throw Error(ErrorKind::LostCoercivity, "non-positive pivot in tridiagonal solve");
    if (i + 1 < n) c[i] = off[i] / pivot;
    d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
  return d;
}

void assemble_stiffness(const Mesh1d& mesh, const Dvec& phi_mid, Dvec& diag, Dvec& off) {
  const long n = mesh.cells - 1;
  if (phi_mid.size() != mesh.cells) throw Error(ErrorKind::InvalidDimension, "one coefficient per element needed");
  const double inv_h = 1.0 / mesh.width();
  diag.resize(n);
  off.resize(std::max(n - 1, 0L));
  // interior node i (1-based) touches elements i-1 and i
  for (long i = 1; i <= n; ++i) diag[i - 1] = (phi_mid[i - 1] + phi_mid[i]) * inv_h;
  for (long i = 1; i < n; ++i) off[i - 1] = -phi_mid[i] * inv_h;
}

Dvec fem_solve(const Mesh1d& mesh, const Dvec& phi_mid, const Dvec& load) {
  if (mesh.cells < 2) throw Error(ErrorKind::InvalidArgument, "mesh needs at least two cells");
  Dvec diag;
  Dvec off;
  assemble_stiffness(mesh, phi_mid, diag, off);
  Dvec nodal = Dvec::Zero(mesh.cells + 1);
  nodal.segment(1, mesh.cells - 1) = solve_tridiagonal(diag, off, load);
  return nodal;
}

Interpolator::Interpolator(const Mesh1d& mesh, const std::vector<double>& points) {
  left_.reserve(points.size());
  frac_.reserve(points.size());
  const double h = mesh.width();
  for (double t : points) {
    if (t < mesh.a || t > mesh.b) throw Error(ErrorKind::InvalidArgument, "interpolation point outside the mesh");
    const double s = (t - mesh.a) / h;
    long e = std::min(static_cast<long>(std::floor(s)), mesh.cells - 1);
    left_.push_back(e);
    frac_.push_back(s - static_cast<double>(e));
  }
}

double Interpolator::apply(const Dvec& nodal, std::size_t p) const {
  const long e = left_[p];
  return (1.0 - frac_[p]) * nodal[e] + frac_[p] * nodal[e + 1];
}

Dvec Interpolator::apply(const Dvec& nodal) const {
  Dvec out(static_cast<Eigen::Index>(size()));
  for (std::size_t p = 0; p < size(); ++p) out[static_cast<Eigen::Index>(p)] = apply(nodal, p);
  return out;
}

void Interpolator::scatter(std::size_t p, double w, Dvec& nodal) const {
  const long e = left_[p];
  nodal[e] += w * (1.0 - frac_[p]);
  nodal[e + 1] += w * frac_[p];
}

}  // namespace ubmc

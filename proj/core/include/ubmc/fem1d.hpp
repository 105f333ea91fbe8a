// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ubmc {

using Dvec = Eigen::VectorXd;

/// Uniform mesh of [a, b] with `cells` elements.
struct Mesh1d {
  double a = 0.0;
  double b = 1.0;
  long cells = 1;

  double width() const { return (b - a) / static_cast<double>(cells); }
  double node(long i) const { return a + (b - a) * static_cast<double>(i) / static_cast<double>(cells); }
  double midpoint(long e) const { return a + (b - a) * (static_cast<double>(e) + 0.5) / static_cast<double>(cells); }
};

/// Solves the symmetric tridiagonal system with main diagonal `diag` and
/// off-diagonal `off` (off[i] couples i and i+1). A non-positive pivot raises
/// LostCoercivity.
Dvec solve_tridiagonal(const Dvec& diag, const Dvec& off, const Dvec& rhs);

/// P1 stiffness for -(phi h')' with one coefficient value per element
/// (midpoint rule), restricted to the interior nodes.
void assemble_stiffness(const Mesh1d& mesh, const Dvec& phi_mid, Dvec& diag, Dvec& off);

/// Trapezoid load: f_i = width * f(t_i) at the interior nodes.
template <typename F>
Dvec trapezoid_load(const Mesh1d& mesh, F&& f) {
  Dvec load(mesh.cells - 1);
  const double h = mesh.width();
  for (long i = 1; i < mesh.cells; ++i) load[i - 1] = h * f(mesh.node(i));
  return load;
}

/// Homogeneous Dirichlet solve; returns all cells + 1 nodal values.
Dvec fem_solve(const Mesh1d& mesh, const Dvec& phi_mid, const Dvec& load);

/// Piecewise-linear interpolation at fixed points, precomputed once per mesh.
class Interpolator {
 public:
  Interpolator() = default;
  Interpolator(const Mesh1d& mesh, const std::vector<double>& points);

  std::size_t size() const { return left_.size(); }
  double apply(const Dvec& nodal, std::size_t p) const;
  Dvec apply(const Dvec& nodal) const;
  /// Adds w * (interpolation functional p) to a nodal vector.
  void scatter(std::size_t p, double w, Dvec& nodal) const;

 private:
  std::vector<long> left_;
  std::vector<double> frac_;
};

}  // namespace ubmc

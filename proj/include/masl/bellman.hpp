#pragma once

#include <vector>

#include "masl/geometry.hpp"

namespace masl {

// Symmetric 2x2 matrix.
struct Sym2 {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
};

// Result of maximizing  -lam*d1 - (1-lam)*d2 + f*sqrt(lam*(1-lam))  over
// lam in [0,1]. weight is the maximizing lam (1/2 on the fully degenerate
// tie d1 == d2, f == 0).
struct SplitMax {
  double value = 0.0;
  double weight = 0.5;
};

// Closed form of the one-direction maximization above. Requires f >= 0.
SplitMax split_max(double d1, double d2, double f);

// sup over unit-trace PSD matrices B of  -B:A + f*sqrt(det B), evaluated
// exactly through the eigenvalues of A. Zero iff A is PSD with
// det A = (f/2)^2.
double hamiltonian(const Sym2& A, double f);

// Brute-force evaluation on n_dir directions (theta = j*pi/n_dir) times an
// n_weight uniform grid on lam in [0,1]. Lower bound of the exact value;
// used as an independent check of the closed form.
double hamiltonian_grid(const Sym2& A, double f, int n_dir, int n_weight);

// Stencil directions theta_j = j*pi/n_theta for j = 0..n_theta-1, with their
// perpendiculars. n_theta must be even and >= 4.
struct DirectionSet {
  int count = 0;
  std::vector<Vec2> dir;
  std::vector<Vec2> perp;

  explicit DirectionSet(int n_theta);
};

}  // namespace masl

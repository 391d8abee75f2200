#include "masl/bellman.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace masl {

SplitMax split_max(double d1, double d2, double f) {
  if (f < 0.0) throw std::invalid_argument("split_max: f must be nonnegative");
  double s = d2 - d1;
  double r = std::sqrt(s * s + f * f);
  if (r == 0.0) return {-d1, 0.5};
  double value = 0.5 * (r - (d1 + d2));
  double lam = 0.5 + 0.5 * s / r;
  if (lam < 0.0) lam = 0.0;
  if (lam > 1.0) lam = 1.0;
  return {value, lam};
}

double hamiltonian(const Sym2& A, double f) {
  double mean = 0.5 * (A.a11 + A.a22);
  double rad = std::sqrt(0.25 * (A.a11 - A.a22) * (A.a11 - A.a22) +
                         A.a12 * A.a12);
  return split_max(mean - rad, mean + rad, f).value;
}

double hamiltonian_grid(const Sym2& A, double f, int n_dir, int n_weight) {
  if (n_dir < 1 || n_weight < 2)
    throw std::invalid_argument("hamiltonian_grid: need n_dir>=1, n_weight>=2");
  if (f < 0.0)
    throw std::invalid_argument("hamiltonian_grid: f must be nonnegative");
  // sqrt(lam*(1-lam)) table shared across directions.
  static thread_local std::vector<double> root;
  static thread_local int root_n = -1;
  if (root_n != n_weight) {
    root.resize(n_weight);
    for (int l = 0; l < n_weight; ++l) {
      double lam = static_cast<double>(l) / (n_weight - 1);
      root[l] = std::sqrt(lam * (1.0 - lam));
    }
    root_n = n_weight;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_dir; ++j) {
    double th = std::numbers::pi * j / n_dir;
    double c = std::cos(th), s = std::sin(th);
    double q1 = c * c * A.a11 + 2.0 * c * s * A.a12 + s * s * A.a22;
    double q2 = s * s * A.a11 - 2.0 * c * s * A.a12 + c * c * A.a22;
    double step = (q2 - q1) / (n_weight - 1);
    for (int l = 0; l < n_weight; ++l) {
      // -lam*q1 - (1-lam)*q2 written as -q2 + lam*(q2-q1)
      double v = -q2 + step * l + f * root[l];
      if (v > best) best = v;
    }
  }
  return best;
}

DirectionSet::DirectionSet(int n_theta) {
  if (n_theta < 4 || n_theta % 2 != 0)
    throw std::invalid_argument("DirectionSet: n_theta must be even and >= 4");
  count = n_theta;
  dir.resize(n_theta);
  perp.resize(n_theta);
  for (int j = 0; j < n_theta; ++j) {
    double th = std::numbers::pi * j / n_theta;
    dir[j] = {std::cos(th), std::sin(th)};
    perp[j] = {-dir[j].y, dir[j].x};
  }
}

}  // namespace masl

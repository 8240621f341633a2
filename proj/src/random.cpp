#include "gpcpd/random.hpp"

#include <cmath>

namespace gpcpd {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform_open(double lo, double hi) {
  double x;
  do {
    x = lo + (hi - lo) * uniform();
  } while (x <= lo || x >= hi);
  return x;
}

double Rng::gaussian() {
  if (spare_) {
    double s = *spare_;
    spare_.reset();
    return s;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  return u * f;
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re, im};
}

Matrix Rng::complex_gaussian_matrix(Index rows, Index cols) {
  // Column by column, then row, so factor draws read like u^{s,j} vectors.
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) m(r, c) = complex_gaussian();
  }
  return m;
}

}  // namespace gpcpd

#include "isoembed/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace isoembed::linalg {

namespace {

Vector jacobi_eigenvalues(Matrix a) {
  const Eigen::Index n = a.rows();
  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= 1e-12 * scale) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig = a.diagonal();
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace

Vector symmetric_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error("eigenvalues requested for a non-square matrix");
  if (m.rows() == 1) return m.diagonal();
  if (m.rows() == 2) {
    const double mean = 0.5 * (m(0, 0) + m(1, 1));
    const double half_gap = 0.5 * (m(0, 0) - m(1, 1));
    const double radius = std::hypot(half_gap, m(0, 1));
    Vector eig(2);
    eig << mean - radius, mean + radius;
    return eig;
  }
  return jacobi_eigenvalues(m);
}

double min_eigenvalue(const Matrix& m) { return symmetric_eigenvalues(m)[0]; }

double max_eigenvalue(const Matrix& m) {
  const Vector eig = symmetric_eigenvalues(m);
  return eig[eig.size() - 1];
}

Matrix pullback(const Matrix& jacobian) { return jacobian.transpose() * jacobian; }

}  // namespace isoembed::linalg

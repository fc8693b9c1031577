#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "isoembed/common.hpp"

namespace isoembed {

using Rational = boost::rational<std::int64_t>;
using RationalVector = std::vector<Rational>;
using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

// Best rational approximation with denominator <= 10^6; throws unless it
// reproduces `x` to 1e-12 relative.
Rational to_rational(double x);
// Accepts "p/q", integers, or decimals.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

// Rigid motion x -> A x + v of R^n whose linear part is an integer orthogonal
// matrix (a signed permutation), so that it normalizes the lattice Z^n.
// Translation parts are rational; group algebra is exact.
class BieberbachElement {
 public:
  // Validates A (square, integer, A^T A = I) and converts v to rationals.
  static BieberbachElement make(const Matrix& a, const Vector& v);
  static BieberbachElement make(IntMatrix a, RationalVector v);
  static BieberbachElement identity(int n);
  static BieberbachElement translation(const Eigen::VectorXi& k);

  int dimension() const { return static_cast<int>(a_.rows()); }
  const IntMatrix& holonomy() const { return a_; }
  const RationalVector& shift() const { return v_; }

  bool is_translation() const;          // A = I
  bool is_lattice_translation() const;  // A = I, v integral
  bool is_identity() const;

  Matrix linear() const;
  Vector offset() const;  // v as doubles

  Vector act(const Vector& x) const;
  // (this o rhs)(x) = this(rhs(x))
  BieberbachElement compose(const BieberbachElement& rhs) const;
  BieberbachElement inverse() const;

  friend bool operator==(const BieberbachElement& a, const BieberbachElement& b) {
    return a.a_ == b.a_ && a.v_ == b.v_;
  }

 private:
  BieberbachElement(IntMatrix a, RationalVector v) : a_(std::move(a)), v_(std::move(v)) {}

  IntMatrix a_;
  RationalVector v_;
};

inline BieberbachElement compose(const BieberbachElement& a, const BieberbachElement& b) {
  return a.compose(b);
}
inline BieberbachElement inverse(const BieberbachElement& d) { return d.inverse(); }
inline Vector act(const BieberbachElement& d, const Vector& x) { return d.act(x); }

// Isometry of R^{N+n} that fixes the first N coordinates and applies
// y -> A y + scale * v to the last n. With scale = sqrt(c) this is the
// ambient extension of d = (A, v) for the flat factor e(x) = sqrt(c) x.
class AmbientIsometry {
 public:
  AmbientIsometry(int passive_dimension, double scale, BieberbachElement active);

  int passive_dimension() const { return passive_; }
  int ambient_dimension() const { return passive_ + active_.dimension(); }
  double scale() const { return scale_; }
  const BieberbachElement& active() const { return active_; }

  Vector operator()(const Vector& y) const;
  Matrix linear_part() const;
  Vector translation() const;

  // (this o rhs); both must share passive dimension and scale.
  AmbientIsometry compose(const AmbientIsometry& rhs) const;

  friend bool operator==(const AmbientIsometry& a, const AmbientIsometry& b) {
    return a.passive_ == b.passive_ && a.scale_ == b.scale_ && a.active_ == b.active_;
  }

 private:
  int passive_;
  double scale_;
  BieberbachElement active_;
};

// d_e with d_e(e(x)) = e(d(x)) for e(x) = sqrt(c) x.
AmbientIsometry induced_action(const BieberbachElement& d, double c);

struct SymmetryGroup {
  std::string name;
  int dimension = 0;
  std::vector<BieberbachElement> generators;

  // Unit translations of Z^n.
  static SymmetryGroup torus(int n);
  // "torus-<n>", "pg" or "pgg"; throws on unknown names or dimension mismatch.
  static SymmetryGroup named(std::string_view name, int n);
};

}  // namespace isoembed

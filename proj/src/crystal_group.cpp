#include "isoembed/crystal_group.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace isoembed {

namespace {

constexpr std::int64_t kMaxDenominator = 1'000'000;

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const auto* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(fmt::format("malformed rational '{}'", whole));
  return value;
}

}  // namespace

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw Error("translation component is not finite");
  // Continued-fraction convergents h/k.
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  while (frac > 1e-15 && k <= kMaxDenominator) {
    const double inv = 1.0 / frac;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    frac = inv - static_cast<double>(a);
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > kMaxDenominator) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    if (std::abs(static_cast<double>(h) / static_cast<double>(k) - x) <=
        1e-15 * std::max(1.0, std::abs(x)))
      break;
  }
  const Rational r(h, k);
  if (std::abs(to_double(r) - x) > 1e-12 * std::max(1.0, std::abs(x)))
    throw Error(fmt::format("translation component {} is not a rational with small denominator", x));
  return r;
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const auto num = parse_int(text.substr(0, slash), text);
    const auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw Error(fmt::format("zero denominator in '{}'", text));
    return Rational(num, den);
  }
  if (text.find_first_of(".eE") == std::string_view::npos) return Rational(parse_int(text, text));
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(fmt::format("malformed rational '{}'", text));
  return to_rational(value);
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return fmt::format("{}/{}", r.numerator(), r.denominator());
}

BieberbachElement BieberbachElement::make(const Matrix& a, const Vector& v) {
  if (a.rows() != a.cols()) throw Error("not a lattice-compatible isometry: A is not square");
  IntMatrix ai(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double r = std::round(a(i, j));
      if (a(i, j) != r) throw Error("not a lattice-compatible isometry: A has non-integer entries");
      ai(i, j) = static_cast<int>(r);
    }
  }
  RationalVector vr;
  vr.reserve(static_cast<std::size_t>(v.size()));
  for (double x : v) vr.push_back(to_rational(x));
  return make(std::move(ai), std::move(vr));
}

BieberbachElement BieberbachElement::make(IntMatrix a, RationalVector v) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw Error("not a lattice-compatible isometry: A is not square");
  if (static_cast<Eigen::Index>(v.size()) != a.rows())
    throw Error("dimension mismatch between A and v");
  const IntMatrix gram = a.transpose() * a;
  if (gram != IntMatrix::Identity(a.rows(), a.cols()))
    throw Error("not a lattice-compatible isometry: A is not orthogonal");
  return BieberbachElement(std::move(a), std::move(v));
}

BieberbachElement BieberbachElement::identity(int n) {
  return BieberbachElement(IntMatrix::Identity(n, n), RationalVector(static_cast<std::size_t>(n)));
}

BieberbachElement BieberbachElement::translation(const Eigen::VectorXi& k) {
  RationalVector v;
  for (int x : k) v.emplace_back(x);
  return BieberbachElement(IntMatrix::Identity(k.size(), k.size()), std::move(v));
}

bool BieberbachElement::is_translation() const {
  return a_ == IntMatrix::Identity(a_.rows(), a_.cols());
}

bool BieberbachElement::is_lattice_translation() const {
  if (!is_translation()) return false;
  for (const auto& x : v_)
    if (x.denominator() != 1) return false;
  return true;
}

bool BieberbachElement::is_identity() const {
  if (!is_translation()) return false;
  for (const auto& x : v_)
    if (x.numerator() != 0) return false;
  return true;
}

Matrix BieberbachElement::linear() const { return a_.cast<double>(); }

Vector BieberbachElement::offset() const {
  Vector v(dimension());
  for (int i = 0; i < dimension(); ++i) v[i] = to_double(v_[static_cast<std::size_t>(i)]);
  return v;
}

Vector BieberbachElement::act(const Vector& x) const {
  if (x.size() != dimension()) throw Error("dimension mismatch in group action");
  return linear() * x + offset();
}

BieberbachElement BieberbachElement::compose(const BieberbachElement& rhs) const {
  if (rhs.dimension() != dimension()) throw Error("dimension mismatch in composition");
  RationalVector v(v_.size());
  for (int i = 0; i < dimension(); ++i) {
    Rational acc = v_[static_cast<std::size_t>(i)];
    for (int j = 0; j < dimension(); ++j) acc += Rational(a_(i, j)) * rhs.v_[static_cast<std::size_t>(j)];
    v[static_cast<std::size_t>(i)] = acc;
  }
  return BieberbachElement(a_ * rhs.a_, std::move(v));
}

BieberbachElement BieberbachElement::inverse() const {
  const IntMatrix at = a_.transpose();
  RationalVector v(v_.size());
  for (int i = 0; i < dimension(); ++i) {
    Rational acc = 0;
    for (int j = 0; j < dimension(); ++j) acc -= Rational(at(i, j)) * v_[static_cast<std::size_t>(j)];
    v[static_cast<std::size_t>(i)] = acc;
  }
  return BieberbachElement(at, std::move(v));
}

AmbientIsometry::AmbientIsometry(int passive_dimension, double scale, BieberbachElement active)
    : passive_(passive_dimension), scale_(scale), active_(std::move(active)) {
  if (passive_dimension < 0) throw Error("negative passive dimension");
  if (!(scale > 0.0)) throw Error("ambient isometry scale must be positive");
}

Vector AmbientIsometry::operator()(const Vector& y) const {
  if (y.size() != ambient_dimension()) throw Error("dimension mismatch in ambient isometry");
  Vector out = y;
  const int n = active_.dimension();
  out.tail(n) = active_.linear() * y.tail(n) + scale_ * active_.offset();
  return out;
}

Matrix AmbientIsometry::linear_part() const {
  Matrix m = Matrix::Identity(ambient_dimension(), ambient_dimension());
  const int n = active_.dimension();
  m.bottomRightCorner(n, n) = active_.linear();
  return m;
}

Vector AmbientIsometry::translation() const {
  Vector t = Vector::Zero(ambient_dimension());
  t.tail(active_.dimension()) = scale_ * active_.offset();
  return t;
}

AmbientIsometry AmbientIsometry::compose(const AmbientIsometry& rhs) const {
  if (rhs.passive_ != passive_ || rhs.scale_ != scale_)
    throw Error("ambient isometries act on different factorizations");
  return AmbientIsometry(passive_, scale_, active_.compose(rhs.active_));
}

AmbientIsometry induced_action(const BieberbachElement& d, double c) {
  if (!(c > 0.0)) throw Error("induced action needs c > 0");
  return AmbientIsometry(0, std::sqrt(c), d);
}

SymmetryGroup SymmetryGroup::torus(int n) {
  SymmetryGroup g{fmt::format("torus-{}", n), n, {}};
  for (int i = 0; i < n; ++i)
    g.generators.push_back(BieberbachElement::translation(Eigen::VectorXi::Unit(n, i)));
  return g;
}

SymmetryGroup SymmetryGroup::named(std::string_view name, int n) {
  if (name.starts_with("torus-")) {
    int k = 0;
    const auto digits = name.substr(6);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || k < 1)
      throw Error(fmt::format("unknown group '{}'", name));
    if (k != n) throw Error(fmt::format("group '{}' has dimension {}, expected {}", name, k, n));
    return torus(n);
  }
  if (name == "pg" || name == "pgg") {
    if (n != 2) throw Error(fmt::format("group '{}' has dimension 2, expected {}", name, n));
    IntMatrix flip_y(2, 2);
    flip_y << 1, 0, 0, -1;
    IntMatrix flip_x(2, 2);
    flip_x << -1, 0, 0, 1;
    SymmetryGroup g{std::string(name), 2, {}};
    if (name == "pg") {
      g.generators.push_back(BieberbachElement::make(flip_y, {Rational(1, 2), Rational(0)}));
      g.generators.push_back(BieberbachElement::translation(Eigen::Vector2i(0, 1)));
    } else {
      g.generators.push_back(BieberbachElement::make(flip_y, {Rational(1, 2), Rational(1, 2)}));
      g.generators.push_back(BieberbachElement::make(flip_x, {Rational(1, 2), Rational(1, 2)}));
    }
    return g;
  }
  throw Error(fmt::format("unknown group '{}'", name));
}

}  // namespace isoembed

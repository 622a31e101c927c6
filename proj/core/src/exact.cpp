#include "graftlab/exact.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "graftlab/error.hpp"

namespace graftlab {

namespace {

bool is_perfect_square(std::int64_t d, std::int64_t& root) {
  if (d < 0) return false;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(d))));
  while (r * r > d) --r;
  while ((r + 1) * (r + 1) <= d) ++r;
  root = r;
  return r * r == d;
}

int rsign(const Rational& r) { return r.sign(); }

}  // namespace

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  auto parse_int = [&](const std::string& t) {
    if (t.empty()) throw ValidationError("malformed rational '" + s + "'");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw ValidationError("malformed rational '" + s + "'");
    for (std::size_t k = i; k < t.size(); ++k) {
      if (t[k] < '0' || t[k] > '9') throw ValidationError("malformed rational '" + s + "'");
    }
    return BigInt(t[0] == '+' ? t.substr(1) : t);
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  const BigInt num = parse_int(s.substr(0, slash));
  const BigInt den = parse_int(s.substr(slash + 1));
  if (den == 0) throw ValidationError("zero denominator in '" + s + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw ValidationError("non-finite number");
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  // 53 significant bits fit exactly in an int64.
  const auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r{BigInt(m)};
  if (exp > 0) r *= Rational(BigInt(1) << exp);
  if (exp < 0) r /= Rational(BigInt(1) << -exp);
  return r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

QuadNumber::QuadNumber(Rational a, Rational b, std::int64_t D) : a_(std::move(a)), b_(std::move(b)) {
  if (D < 0) throw ValidationError("quadratic irrational needs D >= 0");
  std::int64_t root = 0;
  if (b_ == 0 || D == 0) {
    if (b_ != 0) throw ValidationError("quadratic irrational needs D >= 2");
    D_ = 0;
    return;
  }
  if (is_perfect_square(D, root)) {
    a_ += b_ * root;
    b_ = 0;
    D_ = 0;
    return;
  }
  for (std::int64_t f = 2; f * f <= D; ++f) {
    while (D % (f * f) == 0) {
      D /= f * f;
      b_ *= f;
    }
  }
  D_ = D;
}

QuadNumber QuadNumber::sqrt_of(std::int64_t D) { return {Rational(0), Rational(1), D}; }

std::int64_t QuadNumber::joint_field(const QuadNumber& o) const {
  if (b_ == 0 && o.b_ == 0) return D_ != 0 ? D_ : o.D_;
  if (b_ == 0) return o.D_;
  if (o.b_ == 0) return D_;
  if (D_ != o.D_) throw ValidationError("cannot combine numbers from different quadratic fields");
  return D_;
}

int QuadNumber::sign() const {
  const int sa = rsign(a_);
  const int sb = rsign(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with b^2 D.
  const Rational lhs = a_ * a_;
  const Rational rhs = b_ * b_ * D_;
  if (lhs == rhs) return 0;
  return (lhs > rhs) ? sa : sb;
}

double QuadNumber::to_double() const {
  return graftlab::to_double(a_) + graftlab::to_double(b_) * std::sqrt(static_cast<double>(D_));
}

QuadNumber& QuadNumber::operator+=(const QuadNumber& o) {
  D_ = joint_field(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QuadNumber& QuadNumber::operator-=(const QuadNumber& o) {
  D_ = joint_field(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QuadNumber& QuadNumber::operator*=(const QuadNumber& o) {
  const std::int64_t d = joint_field(o);
  Rational na = a_ * o.a_ + b_ * o.b_ * d;
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  D_ = d;
  return *this;
}

QuadNumber& QuadNumber::operator/=(const QuadNumber& o) {
  const std::int64_t d = joint_field(o);
  const Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * d;
  if (norm == 0) throw NumericalError("division by zero in quadratic field");
  // Multiply by the conjugate.
  Rational na = (a_ * o.a_ - b_ * o.b_ * d) / norm;
  Rational nb = (b_ * o.a_ - a_ * o.b_) / norm;
  a_ = std::move(na);
  b_ = std::move(nb);
  D_ = d;
  return *this;
}

QuadNumber operator-(const QuadNumber& x) {
  QuadNumber r = x;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

std::ostream& operator<<(std::ostream& os, const QuadNumber& q) { return os << to_string(q); }

std::string to_string(const QuadNumber& q) {
  if (q.is_rational()) return to_string(q.a());
  return to_string(q.a()) + (q.b() < 0 ? " - " : " + ") + to_string(q.b() < 0 ? Rational(-q.b()) : q.b()) +
         "*sqrt(" + std::to_string(q.D()) + ")";
}

QuadNumber abs(const QuadNumber& q) { return q.sign() < 0 ? -q : q; }
const QuadNumber& min(const QuadNumber& x, const QuadNumber& y) { return y < x ? y : x; }
const QuadNumber& max(const QuadNumber& x, const QuadNumber& y) { return x < y ? y : x; }

QuadNumber cross(const Point2& u, const Point2& v) { return u.x * v.y - u.y * v.x; }
QuadNumber dot(const Point2& u, const Point2& v) { return u.x * v.x + u.y * v.y; }

}  // namespace graftlab

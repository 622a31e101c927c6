#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace graftlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "p", "p/q" or "-p/q". Throws ValidationError on anything else.
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& r);
// Exact value of a finite double.
Rational rational_from_double(double v);
double to_double(const Rational& r);

// a + b sqrt(D) with rational a, b and a square-free integer D > 1. D = 0 marks
// a plain rational. Numbers from different fields cannot be combined.
class QuadNumber {
 public:
  QuadNumber() = default;
  QuadNumber(int v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  QuadNumber(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
  // Throws ValidationError if D is negative or b != 0 with D < 2.
  QuadNumber(Rational a, Rational b, std::int64_t D);

  static QuadNumber sqrt_of(std::int64_t D);  // sqrt(D), with square factors pulled out

  [[nodiscard]] const Rational& a() const { return a_; }
  [[nodiscard]] const Rational& b() const { return b_; }
  [[nodiscard]] std::int64_t D() const { return D_; }
  [[nodiscard]] bool is_rational() const { return b_ == 0; }

  // Exact sign: -1, 0 or 1.
  [[nodiscard]] int sign() const;
  [[nodiscard]] double to_double() const;

  QuadNumber& operator+=(const QuadNumber& o);
  QuadNumber& operator-=(const QuadNumber& o);
  QuadNumber& operator*=(const QuadNumber& o);
  QuadNumber& operator/=(const QuadNumber& o);  // throws NumericalError on zero

  friend QuadNumber operator+(QuadNumber x, const QuadNumber& y) { return x += y; }
  friend QuadNumber operator-(QuadNumber x, const QuadNumber& y) { return x -= y; }
  friend QuadNumber operator*(QuadNumber x, const QuadNumber& y) { return x *= y; }
  friend QuadNumber operator/(QuadNumber x, const QuadNumber& y) { return x /= y; }
  friend QuadNumber operator-(const QuadNumber& x);

  friend bool operator==(const QuadNumber& x, const QuadNumber& y) { return (x - y).sign() == 0; }
  friend bool operator!=(const QuadNumber& x, const QuadNumber& y) { return !(x == y); }
  friend bool operator<(const QuadNumber& x, const QuadNumber& y) { return (x - y).sign() < 0; }
  friend bool operator>(const QuadNumber& x, const QuadNumber& y) { return y < x; }
  friend bool operator<=(const QuadNumber& x, const QuadNumber& y) { return !(y < x); }
  friend bool operator>=(const QuadNumber& x, const QuadNumber& y) { return !(x < y); }

 private:
  std::int64_t joint_field(const QuadNumber& o) const;

  Rational a_{0};
  Rational b_{0};
  std::int64_t D_ = 0;
};

std::ostream& operator<<(std::ostream& os, const QuadNumber& q);
std::string to_string(const QuadNumber& q);

QuadNumber abs(const QuadNumber& q);
const QuadNumber& min(const QuadNumber& x, const QuadNumber& y);
const QuadNumber& max(const QuadNumber& x, const QuadNumber& y);

struct Point2 {
  QuadNumber x;
  QuadNumber y;

  friend Point2 operator+(const Point2& p, const Point2& q) { return {p.x + q.x, p.y + q.y}; }
  friend Point2 operator-(const Point2& p, const Point2& q) { return {p.x - q.x, p.y - q.y}; }
  friend Point2 operator-(const Point2& p) { return {-p.x, -p.y}; }
  friend Point2 operator*(const QuadNumber& s, const Point2& p) { return {s * p.x, s * p.y}; }
  friend bool operator==(const Point2& p, const Point2& q) { return p.x == q.x && p.y == q.y; }
  friend bool operator!=(const Point2& p, const Point2& q) { return !(p == q); }
};

QuadNumber cross(const Point2& u, const Point2& v);
QuadNumber dot(const Point2& u, const Point2& v);

}  // namespace graftlab

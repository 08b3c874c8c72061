#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace aisle {

class Scalar;

/// Ground field of a session: the rationals or a prime field F_p.
class Field {
 public:
  constexpr Field() = default;

  static Field rationals() { return Field(); }
  /// Throws InvalidInput unless p is a prime below 2^31.
  static Field prime(std::uint64_t p);
  /// Parses "Q" or a prime written in decimal (optionally "F_p" / "GF(p)").
  static Field parse(std::string_view text);

  bool is_rational() const noexcept { return p_ == 0; }
  std::uint64_t characteristic() const noexcept { return p_; }
  std::string name() const;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long v) const;
  Scalar from_rational(const mpq_class& q) const;
  /// Parses "3", "-7/2"; over F_p the rational is reduced modulo p.
  Scalar parse_scalar(std::string_view text) const;

  friend bool operator==(Field a, Field b) noexcept { return a.p_ == b.p_; }
  friend bool operator!=(Field a, Field b) noexcept { return a.p_ != b.p_; }

 private:
  friend class Scalar;
  explicit Field(std::uint64_t p) : p_(p) {}
  std::uint64_t p_ = 0;
};

/// Exact field element. Every scalar carries its field; arithmetic between
/// different fields throws Mismatch.
class Scalar {
 public:
  /// Zero of Q.
  Scalar() = default;

  Field field() const noexcept;
  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  /// Multiplicative inverse; throws InvalidInput on zero.
  Scalar inverse() const;

  /// Canonical text form: "n" or "n/d" over Q, the residue in [0, p) over F_p.
  std::string to_string() const;

  /// Rational value. Over F_p this is the residue as an integer.
  mpq_class to_rational() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s);

 private:
  friend class Field;

  void check_same_field(const Scalar& o) const;

  mpq_class q_;            // value over Q
  std::uint64_t r_ = 0;    // residue over F_p
  std::uint64_t p_ = 0;    // 0 for Q
};

}  // namespace aisle

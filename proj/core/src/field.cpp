#include "aisle/field.hpp"

#include <cctype>
#include <ostream>

#include "aisle/error.hpp"

namespace aisle {

namespace {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (std::uint64_t d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

// p < 2^31, so reduced operands multiply without overflow.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return ((a % p) * (b % p)) % p;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (e > 0) {
    if (e & 1U) result = mul_mod(result, base, p);
    base = mul_mod(base, base, p);
    e >>= 1U;
  }
  return result;
}

std::uint64_t reduce_integer(const mpz_class& z, std::uint64_t p) {
  mpz_class m = z % static_cast<unsigned long>(p);
  if (m < 0) m += static_cast<unsigned long>(p);
  return m.get_ui();
}

std::string trim(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

}  // namespace

Field Field::prime(std::uint64_t p) {
  if (p >= (1ULL << 31) || !is_prime(p)) {
    throw InvalidInput("field characteristic must be a prime below 2^31, got " + std::to_string(p));
  }
  return Field(p);
}

Field Field::parse(std::string_view text) {
  std::string t = trim(text);
  if (t == "Q" || t == "QQ" || t == "rationals") return rationals();
  std::string digits;
  if (t.rfind("F_", 0) == 0) {
    digits = t.substr(2);
  } else if (t.rfind("GF(", 0) == 0 && !t.empty() && t.back() == ')') {
    digits = t.substr(3, t.size() - 4);
  } else {
    digits = t;
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 12) {
    throw InvalidInput("unrecognised field '" + t + "'");
  }
  return prime(std::stoull(digits));
}

std::string Field::name() const { return p_ == 0 ? "Q" : "F_" + std::to_string(p_); }

Scalar Field::zero() const { return from_int(0); }

Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(long long v) const {
  Scalar s;
  s.p_ = p_;
  if (p_ == 0) {
    s.q_ = mpq_class(static_cast<long>(v));
  } else {
    long long m = v % static_cast<long long>(p_);
    if (m < 0) m += static_cast<long long>(p_);
    s.r_ = static_cast<std::uint64_t>(m);
  }
  return s;
}

Scalar Field::from_rational(const mpq_class& q) const {
  Scalar s;
  s.p_ = p_;
  if (p_ == 0) {
    s.q_ = q;
    s.q_.canonicalize();
    return s;
  }
  const std::uint64_t den = reduce_integer(q.get_den(), p_);
  if (den == 0) {
    throw InvalidInput("denominator of " + q.get_str() + " vanishes modulo " + std::to_string(p_));
  }
  s.r_ = mul_mod(reduce_integer(q.get_num(), p_), pow_mod(den, p_ - 2, p_), p_);
  return s;
}

Scalar Field::parse_scalar(std::string_view text) const {
  std::string t = trim(text);
  if (t.empty()) throw InvalidInput("empty scalar");
  const auto slash = t.find('/');
  auto valid_int = [](const std::string& x) {
    std::size_t i = (!x.empty() && (x[0] == '-' || x[0] == '+')) ? 1 : 0;
    if (i >= x.size()) return false;
    return x.find_first_not_of("0123456789", i) == std::string::npos;
  };
  std::string num = slash == std::string::npos ? t : trim(t.substr(0, slash));
  std::string den = slash == std::string::npos ? "1" : trim(t.substr(slash + 1));
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den)) throw InvalidInput("malformed scalar '" + t + "'");
  mpz_class n(num);
  mpz_class d(den);
  if (d == 0) throw InvalidInput("zero denominator in '" + t + "'");
  return from_rational(mpq_class(n, d));
}

Field Scalar::field() const noexcept { return Field(p_); }

bool Scalar::is_zero() const noexcept { return p_ == 0 ? q_ == 0 : r_ == 0; }

bool Scalar::is_one() const noexcept { return p_ == 0 ? q_ == 1 : r_ == 1; }

void Scalar::check_same_field(const Scalar& o) const {
  if (p_ != o.p_) {
    throw Mismatch("scalar field mismatch: " + field().name() + " vs " + o.field().name());
  }
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw InvalidInput("inverse of zero");
  Scalar s = *this;
  if (p_ == 0) {
    s.q_ = 1 / q_;
  } else {
    s.r_ = pow_mod(r_, p_ - 2, p_);
  }
  return s;
}

std::string Scalar::to_string() const { return p_ == 0 ? q_.get_str() : std::to_string(r_); }

mpq_class Scalar::to_rational() const {
  if (p_ == 0) return q_;
  return mpq_class(static_cast<unsigned long>(r_));
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same_field(o);
  if (p_ == 0) {
    q_ += o.q_;
  } else {
    r_ = (r_ + o.r_) % p_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check_same_field(o);
  if (p_ == 0) {
    q_ -= o.q_;
  } else {
    r_ = (r_ + p_ - o.r_) % p_;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same_field(o);
  if (p_ == 0) {
    q_ *= o.q_;
  } else {
    r_ = mul_mod(r_, o.r_, p_);
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (p_ == 0) {
    s.q_ = -q_;
  } else {
    s.r_ = (p_ - r_) % p_;
  }
  return s;
}

bool operator==(const Scalar& a, const Scalar& b) {
  a.check_same_field(b);
  return a.p_ == 0 ? a.q_ == b.q_ : a.r_ == b.r_;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace aisle

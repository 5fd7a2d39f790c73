#pragma once

// Exact scalar arithmetic over the ground field of a computation:
// the rationals, or a prime field F_p with p > 2.  Every value in the
// toolkit is built from these scalars; there is no floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace liexmod {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class ScalarError : public std::runtime_error {
public:
  explicit ScalarError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline bool is_odd_prime(std::uint64_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (std::uint64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

// residue of a (possibly negative) big integer mod p
inline std::uint64_t residue_mod(const BigInt& n, std::uint64_t p) {
  BigInt r = n % BigInt(p);
  if (r < 0) r += BigInt(p);
  return r.convert_to<std::uint64_t>();
}

inline std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p) {
  if (a == 0) throw ScalarError("division by zero in F_p");
  // extended Euclid on (a, p)
  std::int64_t t = 0, newt = 1;
  std::int64_t r = static_cast<std::int64_t>(p), newr = static_cast<std::int64_t>(a);
  while (newr != 0) {
    std::int64_t q = r / newr;
    std::int64_t tmp = t - q * newt;
    t = newt; newt = tmp;
    tmp = r - q * newr;
    r = newr; newr = tmp;
  }
  if (r != 1) throw ScalarError("element not invertible mod p");
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

} // namespace detail

struct FpElem {
  std::uint64_t value = 0;   // always in [0, p)
  std::uint64_t p = 0;
  friend bool operator==(const FpElem&, const FpElem&) = default;
};

class Scalar {
public:
  Scalar() : m_v(BigRat(0)) {}
  explicit Scalar(BigRat q) : m_v(std::move(q)) {}
  explicit Scalar(long n) : m_v(BigRat(n)) {}
  Scalar(std::uint64_t value, std::uint64_t p) : m_v(FpElem{value % p, p}) {}

  bool is_rational() const { return std::holds_alternative<BigRat>(m_v); }
  const BigRat& rational() const { return std::get<BigRat>(m_v); }
  const FpElem& fp() const { return std::get<FpElem>(m_v); }

  bool is_zero() const {
    return is_rational() ? rational() == 0 : fp().value == 0;
  }
  bool is_one() const {
    return is_rational() ? rational() == 1 : fp().value == 1;
  }

  Scalar operator-() const {
    if (is_rational()) return Scalar(BigRat(-rational()));
    const auto& f = fp();
    return Scalar(f.value == 0 ? 0 : f.p - f.value, f.p);
  }

  Scalar inverse() const {
    if (is_rational()) {
      if (rational() == 0) throw ScalarError("division by zero");
      return Scalar(BigRat(1) / rational());
    }
    return Scalar(detail::mod_inv(fp().value, fp().p), fp().p);
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    if (a.is_rational()) return Scalar(BigRat(a.rational() + b.rational()));
    std::uint64_t p = a.fp().p;
    std::uint64_t s = a.fp().value + b.fp().value;
    if (s >= p) s -= p;
    return Scalar(s, p);
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    if (a.is_rational()) return Scalar(BigRat(a.rational() * b.rational()));
    return Scalar(detail::mod_mul(a.fp().value, b.fp().value, a.fp().p), a.fp().p);
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

  Scalar& operator+=(const Scalar& b) { *this = *this + b; return *this; }
  Scalar& operator-=(const Scalar& b) { *this = *this - b; return *this; }
  Scalar& operator*=(const Scalar& b) { *this = *this * b; return *this; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    return a.m_v == b.m_v;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // "num/den" with positive denominator, "num" when integral; residues in F_p
  std::string str() const {
    if (is_rational()) {
      const BigRat& q = rational();
      std::string s = numerator(q).str();
      if (denominator(q) != 1) s += "/" + denominator(q).str();
      return s;
    }
    return std::to_string(fp().value);
  }

private:
  static void check_same(const Scalar& a, const Scalar& b) {
    if (a.is_rational() != b.is_rational())
      throw ScalarError("mixed ground fields in scalar arithmetic");
    if (!a.is_rational() && a.fp().p != b.fp().p)
      throw ScalarError("mixed moduli in F_p arithmetic");
  }

  std::variant<BigRat, FpElem> m_v;
};

// Ground field descriptor, fixed once per problem.
class Field {
public:
  static Field rationals() { return Field(0); }
  static Field prime_field(std::uint64_t p) {
    if (!detail::is_odd_prime(p))
      throw ScalarError("prime field modulus must be an odd prime > 2, got " + std::to_string(p));
    return Field(p);
  }

  bool is_rational() const { return m_p == 0; }
  std::uint64_t modulus() const { return m_p; }

  Scalar zero() const { return from_int(0); }
  Scalar one() const { return from_int(1); }
  Scalar from_int(long n) const {
    if (is_rational()) return Scalar(BigRat(n));
    return Scalar(detail::residue_mod(BigInt(n), m_p), m_p);
  }

  // accepts "n", "-n" and "n/d" in both fields (d inverted mod p over F_p)
  Scalar parse(const std::string& text) const {
    auto slash = text.find('/');
    try {
      BigInt num(slash == std::string::npos ? text : text.substr(0, slash));
      BigInt den = slash == std::string::npos ? BigInt(1) : BigInt(text.substr(slash + 1));
      if (den == 0) throw ScalarError("zero denominator in '" + text + "'");
      if (den < 0) { num = -num; den = -den; }
      if (is_rational()) return Scalar(BigRat(num, den));
      Scalar n(detail::residue_mod(num, m_p), m_p);
      Scalar d(detail::residue_mod(den, m_p), m_p);
      return n / d;
    } catch (const std::exception& e) {
      throw ScalarError("cannot parse scalar '" + text + "': " + e.what());
    }
  }

  std::string str() const {
    return is_rational() ? "Q" : "F" + std::to_string(m_p);
  }

  friend bool operator==(const Field&, const Field&) = default;

private:
  explicit Field(std::uint64_t p) : m_p(p) {}
  std::uint64_t m_p; // 0 for Q
};

} // namespace liexmod

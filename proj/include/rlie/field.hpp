#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rlie {

using Scalar = std::uint32_t;
using Vec = std::vector<Scalar>;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// The prime field GF(p), 5 <= p <= 2^31 - 1.
///
/// Elements are kept in the canonical range 0..p-1; products go through a
/// 64-bit intermediate so no reduction can overflow.
class Field {
 public:
  static constexpr std::uint64_t kMaxPrime = 2147483647ULL;

  explicit Field(std::uint64_t p) : p_(static_cast<Scalar>(p)) {
    if (p < 5) throw std::invalid_argument("field characteristic must be >= 5, got " + std::to_string(p));
    if (p > kMaxPrime) throw std::invalid_argument("field characteristic exceeds 2^31-1");
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  }

  Scalar p() const noexcept { return p_; }

  // How many unreduced products (p-1)^2 can be summed in a uint64 on top of a
  // reduced value before a reduction is required.
  std::uint64_t lazy_batch() const noexcept {
    std::uint64_t sq = std::uint64_t{p_ - 1} * (p_ - 1);
    return (UINT64_MAX - p_) / sq;
  }

  Scalar add(Scalar a, Scalar b) const noexcept {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Scalar>(s >= p_ ? s - p_ : s);
  }
  Scalar sub(Scalar a, Scalar b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  Scalar neg(Scalar a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Scalar mul(Scalar a, Scalar b) const noexcept {
    return static_cast<Scalar>((std::uint64_t{a} * b) % p_);
  }
  // a - m*b
  Scalar sub_mul(Scalar a, Scalar m, Scalar b) const noexcept { return sub(a, mul(m, b)); }

  Scalar inv(Scalar a) const {
    if (a % p_ == 0) throw std::domain_error("non-invertible element");
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p_, new_r = a % p_;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      t = std::exchange(new_t, t - q * new_t);
      r = std::exchange(new_r, r - q * new_r);
    }
    if (t < 0) t += p_;
    return static_cast<Scalar>(t);
  }
  Scalar div(Scalar a, Scalar b) const { return mul(a, inv(b)); }

  Scalar pow(Scalar a, std::uint64_t e) const noexcept {
    std::uint64_t base = a % p_, acc = 1 % p_;
    while (e) {
      if (e & 1) acc = acc * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<Scalar>(acc);
  }

  Scalar from_int(std::int64_t x) const noexcept {
    std::int64_t r = x % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Scalar>(r);
  }

  // Representative in (-p/2, p/2], handy for printing small signed coefficients.
  std::int64_t to_signed(Scalar a) const noexcept {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : static_cast<std::int64_t>(a);
  }

  friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_; }

 private:
  Scalar p_;
};

enum class ScalarOp { Add, Sub, Mul, Inv, Pow };

/// Uniform entry point over the field operations; `b` is the exponent for Pow
/// and ignored for Inv.
inline Scalar scalar_op(const Field& f, ScalarOp op, Scalar a, Scalar b = 0) {
  switch (op) {
    case ScalarOp::Add: return f.add(a, b);
    case ScalarOp::Sub: return f.sub(a, b);
    case ScalarOp::Mul: return f.mul(a, b);
    case ScalarOp::Inv: return f.inv(a);
    case ScalarOp::Pow: return f.pow(a, b);
  }
  throw std::invalid_argument("unknown scalar operation");
}

}  // namespace rlie

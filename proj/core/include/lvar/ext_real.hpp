#pragma once

#include <compare>
#include <ostream>
#include <string>

namespace lvar {

/// A real number or one of the two infinities.
class ExtReal {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : kind_(Kind::Finite), value_(v) {}  // NOLINT: implicit by design

  static constexpr ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
  static constexpr ExtReal neg_inf() { return ExtReal(Kind::NegInf); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::Finite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }

  /// Finite value; throws DomainError on an infinity.
  double value() const;
  /// Finite value, or IEEE infinity of the matching sign.
  double as_double() const;

  std::string to_string() const;

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::Finite || a.value_ == b.value_;
  }
  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b);

  /// +inf absorbs finite and +inf; -inf absorbs finite; -inf + +inf throws DomainError.
  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a);

 private:
  explicit constexpr ExtReal(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

ExtReal max(const ExtReal& a, const ExtReal& b);
ExtReal min(const ExtReal& a, const ExtReal& b);

/// |a-b| <= tol for finite values, identical kind otherwise.
bool approx_equal(const ExtReal& a, const ExtReal& b, double tol);

std::ostream& operator<<(std::ostream& os, const ExtReal& x);

}  // namespace lvar

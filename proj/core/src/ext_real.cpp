#include "lvar/ext_real.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lvar/errors.hpp"

namespace lvar {

double ExtReal::value() const {
  if (kind_ != Kind::Finite) throw DomainError("ExtReal::value on " + to_string());
  return value_;
}

double ExtReal::as_double() const {
  switch (kind_) {
    case Kind::NegInf: return -std::numeric_limits<double>::infinity();
    case Kind::PosInf: return std::numeric_limits<double>::infinity();
    default: return value_;
  }
}

std::string ExtReal::to_string() const {
  if (kind_ == Kind::PosInf) return "+inf";
  if (kind_ == Kind::NegInf) return "-inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
  auto rank = [](ExtReal::Kind k) {
    return k == ExtReal::Kind::NegInf ? 0 : (k == ExtReal::Kind::Finite ? 1 : 2);
  };
  if (a.kind_ != b.kind_) return rank(a.kind_) <=> rank(b.kind_);
  if (a.kind_ != ExtReal::Kind::Finite) return std::partial_ordering::equivalent;
  return a.value_ <=> b.value_;
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  const bool pos = a.is_pos_inf() || b.is_pos_inf();
  const bool neg = a.is_neg_inf() || b.is_neg_inf();
  if (pos && neg) throw DomainError("sum of -inf and +inf is undefined");
  if (pos) return ExtReal::pos_inf();
  if (neg) return ExtReal::neg_inf();
  return ExtReal(a.value_ + b.value_);
}

ExtReal operator-(const ExtReal& a) {
  if (a.is_pos_inf()) return ExtReal::neg_inf();
  if (a.is_neg_inf()) return ExtReal::pos_inf();
  return ExtReal(-a.value_);
}

ExtReal max(const ExtReal& a, const ExtReal& b) { return (a < b) ? b : a; }
ExtReal min(const ExtReal& a, const ExtReal& b) { return (b < a) ? b : a; }

bool approx_equal(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.kind() != b.kind()) return false;
  if (!a.is_finite()) return true;
  return std::fabs(a.value() - b.value()) <= tol;
}

std::ostream& operator<<(std::ostream& os, const ExtReal& x) { return os << x.to_string(); }

}  // namespace lvar

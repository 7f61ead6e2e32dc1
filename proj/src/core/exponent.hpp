#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vva {

// A norm exponent in [1, inf], stored through its reciprocal so that
// infinity needs no sentinel arithmetic: reciprocal 0 encodes inf,
// reciprocal 1 encodes 1. All exponent algebra in this library is done
// on reciprocals.
class Exponent {
 public:
  Exponent() : recip_(1.0) {}

  static Exponent from_value(double v) {
    if (std::isnan(v) || v < 1.0) {
      throw std::invalid_argument("exponent value must be in [1, inf]");
    }
    Exponent e;
    e.recip_ = std::isinf(v) ? 0.0 : 1.0 / v;
    return e;
  }

  static Exponent from_reciprocal(double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("exponent reciprocal must be in [0, 1]");
    }
    Exponent e;
    e.recip_ = r;
    return e;
  }

  static Exponent infinity() { return from_reciprocal(0.0); }
  static Exponent one() { return from_reciprocal(1.0); }

  double reciprocal() const { return recip_; }
  bool is_infinite() const { return recip_ == 0.0; }

  double value() const {
    return recip_ == 0.0 ? std::numeric_limits<double>::infinity()
                         : 1.0 / recip_;
  }

  // Exponent order: larger exponent means smaller reciprocal.
  friend bool operator<=(const Exponent& a, const Exponent& b) {
    return a.recip_ >= b.recip_;
  }
  friend bool operator>=(const Exponent& a, const Exponent& b) {
    return a.recip_ <= b.recip_;
  }
  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.recip_ == b.recip_;
  }

 private:
  double recip_;
};

}  // namespace vva

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "contrib/util.hpp"

namespace contrib {

enum class Shape { Linear, Convex, Concave, StrictlyConvex, StrictlyConcave };

std::string shape_name(Shape s);

// Nondecreasing scalar function h with h(0) = 0 and evaluable one-sided
// derivatives. Closed family: a*x, a*x^k (optionally capped for k <= 1),
// and piecewise-linear through increasing (x, value) points starting at (0,0);
// the final segment extends to the right.
class ScalarFn {
 public:
  enum class Kind { Linear, Power, PiecewiseLinear };

  static ScalarFn linear(double a);
  static ScalarFn power(double a, double k);
  // a * min(x, cap)^k; constant beyond cap. Only for k <= 1 so the shape stays concave.
  static ScalarFn power_capped(double a, double k, double cap);
  static ScalarFn piecewise_linear(std::vector<std::pair<double, double>> points);

  double operator()(double x) const;
  double right_deriv(double x) const;  // h+(x); +inf for power k<1 at x=0
  double left_deriv(double x) const;   // h-(x); defined as h+(0) at x=0

  Kind kind() const { return kind_; }
  Shape shape() const { return shape_; }
  bool convex() const { return shape_ == Shape::Convex || shape_ == Shape::StrictlyConvex || shape_ == Shape::Linear; }
  bool concave() const { return shape_ == Shape::Concave || shape_ == Shape::StrictlyConcave || shape_ == Shape::Linear; }
  bool strictly_convex() const { return shape_ == Shape::StrictlyConvex; }
  bool strictly_concave() const { return shape_ == Shape::StrictlyConcave; }
  bool is_linear() const { return shape_ == Shape::Linear; }

  // Interior derivative kinks in ascending order (pwl breakpoints, power cap).
  std::vector<double> breakpoints() const;

  double coef_a() const { return a_; }
  double exponent_k() const { return k_; }
  double cap() const { return cap_; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

  bool operator==(const ScalarFn&) const = default;

 private:
  ScalarFn() = default;

  Kind kind_ = Kind::Linear;
  Shape shape_ = Shape::Linear;
  double a_ = 1.0;
  double k_ = 1.0;
  double cap_ = kInf;
  std::vector<std::pair<double, double>> points_;  // pwl only
};

}  // namespace contrib

#pragma once

#include <string>
#include <vector>

#include "contrib/scalar_fn.hpp"
#include "contrib/util.hpp"

namespace contrib {

// Symmetric bivariate polynomial with nonnegative coefficients, stored as
// monomial triples (i, j, coef). Symmetry i<->j is enforced at construction.
class SymPoly {
 public:
  struct Term {
    int i, j;
    double coef;
  };

  explicit SymPoly(std::vector<Term> terms);

  double operator()(double x, double y) const;
  double dx(double x, double y) const;
  double dxx(double x, double y) const;

  // Every monomial has both exponents >= 1, so p(x, 0) = 0.
  bool zero_on_axis() const;
  // Every monomial has both exponents <= 1 (at most c*xy + c'*(x+y)).
  bool multilinear() const;
  bool has_term_with_dx_positive() const;   // some monomial with i >= 1
  bool has_term_with_dxx_positive() const;  // some monomial with i >= 2

  const std::vector<Term>& terms() const { return terms_; }
  bool operator==(const SymPoly&) const;

 private:
  std::vector<Term> terms_;  // sorted by (i, j)
};

// Symmetric nondecreasing edge reward f(x, y). Closed variant family so the
// paper's function classes are decidable structurally.
class RewardSpec {
 public:
  enum class Kind { WeightedSum, WeightedProduct, PolyCompose, MinEffort, MaxEffort };

  static RewardSpec weighted_sum(double c);          // c * (x + y)
  static RewardSpec weighted_product(double c);      // c * x * y
  static RewardSpec poly_compose(SymPoly p, ScalarFn outer);  // outer(p(x, y))
  static RewardSpec min_effort(ScalarFn h);          // h(min(x, y))
  static RewardSpec max_effort(ScalarFn h);          // h(max(x, y))

  double operator()(double x, double y) const;
  // One-sided partial derivatives in the first argument; symmetry covers the second.
  double dx_right(double x, double y) const;
  double dx_left(double x, double y) const;
  // Maximum attainable reward c_{u,v} = f(Bu, Bv).
  double max_reward(double bu, double bv) const { return (*this)(bu, bv); }

  Kind kind() const { return kind_; }
  double coef() const { return c_; }
  const ScalarFn& scalar() const { return h_; }
  const SymPoly& poly() const { return poly_; }

  // Class C: symmetric nondecreasing coordinate-convex.
  bool in_class_c() const;
  // Strictly coordinate-convex on the open positive orthant.
  bool in_class_c_prime() const;
  // Class C0: in C and f(x, 0) = 0.
  bool in_class_c0() const;
  bool coordinate_concave() const;
  bool strictly_coordinate_concave() const;
  // Mixed partial d2f/dxdy >= 0 everywhere (slack-elimination precondition).
  bool nonneg_mixed_partial() const;

  std::string kind_name() const;

 private:
  RewardSpec() : poly_({{1, 1, 1.0}}) {}

  Kind kind_ = Kind::WeightedSum;
  double c_ = 1.0;       // weighted sum/product
  ScalarFn h_ = ScalarFn::linear(1.0);  // scalar for min/max/outer
  SymPoly poly_;         // poly_compose only
};

}  // namespace contrib

#include "contrib/reward.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace contrib {

SymPoly::SymPoly(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ParseError("polynomial needs at least one term", "");
  for (const auto& t : terms_) {
    if (t.i < 0 || t.j < 0) throw ParseError("polynomial exponents must be nonnegative", "");
    if (t.i == 0 && t.j == 0) throw ParseError("polynomial must vanish at the origin", "");
    if (!(t.coef > 0)) throw ParseError("polynomial coefficients must be positive", "");
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  for (size_t i = 1; i < terms_.size(); ++i)
    if (terms_[i].i == terms_[i - 1].i && terms_[i].j == terms_[i - 1].j)
      throw ParseError("duplicate polynomial monomial", "");
  for (const auto& t : terms_) {
    if (t.i == t.j) continue;
    bool mirrored = std::any_of(terms_.begin(), terms_.end(), [&](const Term& s) {
      return s.i == t.j && s.j == t.i && s.coef == t.coef;
    });
    if (!mirrored)
      throw ParseError("polynomial is not symmetric", "monomial x^" + std::to_string(t.i) +
                                                          " y^" + std::to_string(t.j));
  }
}

static double ipow(double x, int n) {
  double r = 1;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double SymPoly::operator()(double x, double y) const {
  // Mirror monomials are paired so f(x,y) and f(y,x) are bit-identical.
  double s = 0;
  for (const auto& t : terms_) {
    if (t.i > t.j) continue;
    if (t.i == t.j)
      s += t.coef * ipow(x, t.i) * ipow(y, t.j);
    else
      s += t.coef * (ipow(x, t.i) * ipow(y, t.j) + ipow(x, t.j) * ipow(y, t.i));
  }
  return s;
}

double SymPoly::dx(double x, double y) const {
  double s = 0;
  for (const auto& t : terms_)
    if (t.i >= 1) s += t.coef * t.i * ipow(x, t.i - 1) * ipow(y, t.j);
  return s;
}

double SymPoly::dxx(double x, double y) const {
  double s = 0;
  for (const auto& t : terms_)
    if (t.i >= 2) s += t.coef * t.i * (t.i - 1) * ipow(x, t.i - 2) * ipow(y, t.j);
  return s;
}

bool SymPoly::zero_on_axis() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.i >= 1 && t.j >= 1; });
}

bool SymPoly::multilinear() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.i <= 1 && t.j <= 1; });
}

bool SymPoly::has_term_with_dx_positive() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.i >= 1; });
}

bool SymPoly::has_term_with_dxx_positive() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.i >= 2; });
}

bool SymPoly::operator==(const SymPoly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].i != o.terms_[i].i || terms_[i].j != o.terms_[i].j ||
        terms_[i].coef != o.terms_[i].coef)
      return false;
  return true;
}

RewardSpec RewardSpec::weighted_sum(double c) {
  if (!(c > 0)) throw ParseError("weighted_sum requires c > 0", "");
  RewardSpec r;
  r.kind_ = Kind::WeightedSum;
  r.c_ = c;
  return r;
}

RewardSpec RewardSpec::weighted_product(double c) {
  if (!(c > 0)) throw ParseError("weighted_product requires c > 0", "");
  RewardSpec r;
  r.kind_ = Kind::WeightedProduct;
  r.c_ = c;
  return r;
}

RewardSpec RewardSpec::poly_compose(SymPoly p, ScalarFn outer) {
  RewardSpec r;
  r.kind_ = Kind::PolyCompose;
  r.poly_ = std::move(p);
  r.h_ = std::move(outer);
  return r;
}

RewardSpec RewardSpec::min_effort(ScalarFn h) {
  RewardSpec r;
  r.kind_ = Kind::MinEffort;
  r.h_ = std::move(h);
  return r;
}

RewardSpec RewardSpec::max_effort(ScalarFn h) {
  RewardSpec r;
  r.kind_ = Kind::MaxEffort;
  r.h_ = std::move(h);
  return r;
}

double RewardSpec::operator()(double x, double y) const {
  if (x < 0) x = 0;
  if (y < 0) y = 0;
  switch (kind_) {
    case Kind::WeightedSum: return c_ * (x + y);
    case Kind::WeightedProduct: return c_ * (x * y);
    case Kind::PolyCompose: return h_(poly_(x, y));
    case Kind::MinEffort: return h_(std::min(x, y));
    case Kind::MaxEffort: return h_(std::max(x, y));
  }
  return 0;
}

double RewardSpec::dx_right(double x, double y) const {
  if (x < 0) x = 0;
  if (y < 0) y = 0;
  switch (kind_) {
    case Kind::WeightedSum: return c_;
    case Kind::WeightedProduct: return c_ * y;
    case Kind::PolyCompose: return h_.right_deriv(poly_(x, y)) * poly_.dx(x, y);
    case Kind::MinEffort: return x < y ? h_.right_deriv(x) : 0.0;
    case Kind::MaxEffort: return x >= y ? h_.right_deriv(x) : 0.0;
  }
  return 0;
}

double RewardSpec::dx_left(double x, double y) const {
  if (x <= 0) return dx_right(0, y);
  if (y < 0) y = 0;
  switch (kind_) {
    case Kind::WeightedSum: return c_;
    case Kind::WeightedProduct: return c_ * y;
    case Kind::PolyCompose: return h_.left_deriv(poly_(x, y)) * poly_.dx(x, y);
    case Kind::MinEffort: return x <= y ? h_.left_deriv(x) : 0.0;
    case Kind::MaxEffort: return x > y ? h_.left_deriv(x) : 0.0;
  }
  return 0;
}

bool RewardSpec::in_class_c() const {
  switch (kind_) {
    case Kind::WeightedSum:
    case Kind::WeightedProduct: return true;
    case Kind::PolyCompose: return h_.convex();
    case Kind::MinEffort: return false;  // concave kink at x = y
    case Kind::MaxEffort: return h_.convex();
  }
  return false;
}

bool RewardSpec::in_class_c_prime() const {
  if (!in_class_c()) return false;
  switch (kind_) {
    case Kind::PolyCompose:
      // dxx f = h''*(dx p)^2 + h'*dxx p; strict on x, y > 0 if either term is.
      return (h_.strictly_convex() && poly_.has_term_with_dx_positive()) ||
             poly_.has_term_with_dxx_positive();
    default:
      return false;  // bilinear / linear variants are never strict
  }
}

bool RewardSpec::in_class_c0() const {
  if (!in_class_c()) return false;
  switch (kind_) {
    case Kind::WeightedProduct: return true;
    case Kind::PolyCompose: return poly_.zero_on_axis();
    default: return false;
  }
}

bool RewardSpec::coordinate_concave() const {
  switch (kind_) {
    case Kind::WeightedSum:
    case Kind::WeightedProduct: return true;  // linear in each coordinate
    case Kind::PolyCompose:
      // dxx f = h''*(dx p)^2 + h'*dxx p <= 0 needs h concave and dxx p = 0.
      return h_.concave() && poly_.multilinear();
    case Kind::MinEffort: return h_.concave();
    case Kind::MaxEffort: return false;  // convex kink at x = y
  }
  return false;
}

bool RewardSpec::strictly_coordinate_concave() const {
  if (!coordinate_concave()) return false;
  return kind_ == Kind::PolyCompose
             ? (h_.strictly_concave() && poly_.has_term_with_dx_positive())
             : (kind_ == Kind::MinEffort && h_.strictly_concave());
}

bool RewardSpec::nonneg_mixed_partial() const {
  switch (kind_) {
    case Kind::WeightedSum:
    case Kind::WeightedProduct: return true;
    case Kind::PolyCompose: return h_.convex();  // h''*px*py + h'*pxy >= 0
    default: return false;
  }
}

std::string RewardSpec::kind_name() const {
  switch (kind_) {
    case Kind::WeightedSum: return "weighted_sum";
    case Kind::WeightedProduct: return "weighted_product";
    case Kind::PolyCompose: return "poly_convex";
    case Kind::MinEffort: return "min_effort";
    case Kind::MaxEffort: return "max_effort";
  }
  return "?";
}

}  // namespace contrib

#include "contrib/scalar_fn.hpp"

#include <algorithm>
#include <cmath>

namespace contrib {

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::Linear: return "linear";
    case Shape::Convex: return "convex";
    case Shape::Concave: return "concave";
    case Shape::StrictlyConvex: return "strictly-convex";
    case Shape::StrictlyConcave: return "strictly-concave";
  }
  return "?";
}

ScalarFn ScalarFn::linear(double a) {
  if (!(a > 0)) throw ParseError("linear scalar fn requires a > 0", "");
  ScalarFn f;
  f.kind_ = Kind::Linear;
  f.shape_ = Shape::Linear;
  f.a_ = a;
  return f;
}

ScalarFn ScalarFn::power(double a, double k) {
  if (!(a > 0) || !(k > 0)) throw ParseError("power scalar fn requires a > 0, k > 0", "");
  ScalarFn f;
  f.kind_ = Kind::Power;
  f.a_ = a;
  f.k_ = k;
  f.shape_ = k > 1 ? Shape::StrictlyConvex : (k < 1 ? Shape::StrictlyConcave : Shape::Linear);
  if (k == 1) f.kind_ = Kind::Linear;
  return f;
}

ScalarFn ScalarFn::power_capped(double a, double k, double cap) {
  if (!(k <= 1)) throw ParseError("capped power scalar fn requires k <= 1", "");
  if (!(cap > 0)) throw ParseError("capped power scalar fn requires cap > 0", "");
  ScalarFn f = power(a, k);
  f.kind_ = Kind::Power;
  f.cap_ = cap;
  f.shape_ = Shape::Concave;  // the flat tail removes strictness
  return f;
}

ScalarFn ScalarFn::piecewise_linear(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw ParseError("piecewise_linear needs at least 2 points", "");
  if (points.front().first != 0.0 || points.front().second != 0.0)
    throw ParseError("piecewise_linear must start at (0,0)", "");
  for (size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].first > points[i - 1].first))
      throw ParseError("non-monotone piecewise breakpoints", "point " + std::to_string(i));
    if (points[i].second < points[i - 1].second)
      throw ParseError("piecewise_linear values must be nondecreasing", "point " + std::to_string(i));
  }
  ScalarFn f;
  f.kind_ = Kind::PiecewiseLinear;
  f.points_ = std::move(points);
  bool nondec = true, noninc = true, strict_change = false;
  double prev = -1;
  for (size_t i = 1; i < f.points_.size(); ++i) {
    double slope = (f.points_[i].second - f.points_[i - 1].second) /
                   (f.points_[i].first - f.points_[i - 1].first);
    if (i > 1) {
      if (slope < prev) nondec = false;
      if (slope > prev) noninc = false;
      if (slope != prev) strict_change = true;
    }
    prev = slope;
  }
  if (!nondec && !noninc) throw ParseError("piecewise_linear slopes must be monotone", "");
  f.shape_ = !strict_change ? Shape::Linear : (nondec ? Shape::Convex : Shape::Concave);
  return f;
}

double ScalarFn::operator()(double x) const {
  if (x < 0) x = 0;
  switch (kind_) {
    case Kind::Linear:
      return a_ * x;
    case Kind::Power:
      return a_ * std::pow(std::min(x, cap_), k_);
    case Kind::PiecewiseLinear: {
      size_t i = 1;
      while (i + 1 < points_.size() && x > points_[i].first) ++i;
      const auto& [x0, y0] = points_[i - 1];
      const auto& [x1, y1] = points_[i];
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return 0;
}

double ScalarFn::right_deriv(double x) const {
  if (x < 0) x = 0;
  switch (kind_) {
    case Kind::Linear:
      return a_;
    case Kind::Power:
      if (x >= cap_) return 0.0;
      if (x == 0.0) return k_ > 1 ? 0.0 : (k_ == 1 ? a_ : kInf);
      return a_ * k_ * std::pow(x, k_ - 1);
    case Kind::PiecewiseLinear: {
      size_t i = 1;
      while (i + 1 < points_.size() && x >= points_[i].first) ++i;
      const auto& [x0, y0] = points_[i - 1];
      const auto& [x1, y1] = points_[i];
      return (y1 - y0) / (x1 - x0);
    }
  }
  return 0;
}

double ScalarFn::left_deriv(double x) const {
  if (x <= 0) return right_deriv(0);
  switch (kind_) {
    case Kind::Linear:
      return a_;
    case Kind::Power:
      if (x > cap_) return 0.0;
      return a_ * k_ * std::pow(std::min(x, cap_), k_ - 1);
    case Kind::PiecewiseLinear: {
      size_t i = 1;
      while (i + 1 < points_.size() && x > points_[i].first) ++i;
      const auto& [x0, y0] = points_[i - 1];
      const auto& [x1, y1] = points_[i];
      return (y1 - y0) / (x1 - x0);
    }
  }
  return 0;
}

std::vector<double> ScalarFn::breakpoints() const {
  std::vector<double> bps;
  if (kind_ == Kind::PiecewiseLinear) {
    for (size_t i = 1; i + 1 < points_.size(); ++i) bps.push_back(points_[i].first);
  } else if (kind_ == Kind::Power && std::isfinite(cap_)) {
    bps.push_back(cap_);
  }
  return bps;
}

}  // namespace contrib

#include "cnls/smooth_bump.hpp"

#include <cmath>
#include <stdexcept>

namespace cnls {

double smooth_step9(double s, int order) {
  if (order < 0 || order > 4) throw std::invalid_argument("smooth_step9: order in [0,4]");
  if (s <= 0.0) return order == 0 ? 0.0 : 0.0;
  if (s >= 1.0) return order == 0 ? 1.0 : 0.0;
  // coefficients of s^5 .. s^9
  static const double c[5] = {126.0, -420.0, 540.0, -315.0, 70.0};
  double sum = 0.0;
  for (int k = 0; k < 5; ++k) {
    const int p = 5 + k;
    if (p < order) continue;
    double coeff = c[k];
    for (int j = 0; j < order; ++j) coeff *= (p - j);
    sum += coeff * std::pow(s, p - order);
  }
  return sum;
}

C4Bump::C4Bump(double a_, double b_) : a(a_), b(b_) {
  if (!(b > a)) throw std::invalid_argument("C4Bump: need b > a");
}

double C4Bump::eval(double x, int order) const {
  if (x <= a) return order == 0 ? 1.0 : 0.0;
  if (x >= b) return 0.0;
  const double scale = 1.0 / (b - a);
  const double s = (x - a) * scale;
  double v = -smooth_step9(s, order);
  if (order == 0) return 1.0 + v;
  for (int j = 0; j < order; ++j) v *= scale;
  return v;
}

}  // namespace cnls

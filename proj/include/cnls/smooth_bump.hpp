#ifndef CNLS_SMOOTH_BUMP_HPP
#define CNLS_SMOOTH_BUMP_HPP

// C^4 cutoff profiles. The transition uses the degree-9 step polynomial
//   S(s) = 126 s^5 - 420 s^6 + 540 s^7 - 315 s^8 + 70 s^9,
// whose first four derivatives vanish at s = 0 and s = 1 (S' = 630 s^4 (1-s)^4),
// so every profile built from it joins its flat pieces with C^4 regularity.

namespace cnls {

// S and its derivatives; order in [0, 4]. Outside [0,1] the step is clamped.
double smooth_step9(double s, int order = 0);

// chi(x) = 1 for x <= a, 0 for x >= b, C^4 monotone transition on (a, b).
struct C4Bump {
  double a = 1.0;
  double b = 2.0;

  C4Bump() = default;
  C4Bump(double a_, double b_);

  double value(double x) const { return eval(x, 0); }
  // d^k chi / dx^k, k in [0, 4].
  double eval(double x, int order) const;
};

}  // namespace cnls

#endif

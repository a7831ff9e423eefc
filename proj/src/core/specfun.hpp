#pragma once

namespace fbt::specfun {

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1]. Evaluated by
// the Lentz continued fraction, switching to the symmetric form for
// x > (a + 1) / (a + b + 2) so the fraction converges quickly.
double incompleteBeta(double a, double b, double x);

// P(X > f) for X ~ F(d1, d2).
double fSurvival(double f, double d1, double d2);

double normalCdf(double z);
double normalUpperTail(double z);

// Inverse of normalCdf for p in (0, 1).
double normalQuantile(double p);

}  // namespace fbt::specfun

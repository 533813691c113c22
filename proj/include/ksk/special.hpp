#pragma once

namespace ksk::special {

// Surface area of the unit sphere in R^d.
double sphere_area(int d);

// E|W_1|^p for W uniform on the unit sphere in R^d (first coordinate).
double sphere_abs_moment(int d, double p);

// K(alpha) = int_0^inf (1 - cos s) s^{-1-alpha} ds, alpha in (0,2).
double stable_cos_constant(double alpha);

// C(x) = int_0^x (1 - cos s) s^{-1-alpha} ds.
double cos_compensated(double x, double alpha);

// D(x) = int_0^x (s - sin s) s^{-1-alpha} ds.
double sin_compensated(double x, double alpha);

// E(x) = int_x^inf sin(s) s^{-1-alpha} ds, x > 0.
double sin_tail(double x, double alpha);

// c(d,alpha) = int_{R^d} (1 - cos(e.y)) |y|^{-d-alpha} dy; the isotropic
// characteristic exponent is c(d,alpha) * kappa * |xi|^alpha.
double isotropic_exponent_constant(int d, double alpha);

// Regularized incomplete beta I_x(a,b) and exact (Clopper-Pearson) binomial
// confidence bounds.
double betainc(double a, double b, double x);
void clopper_pearson(long k, long n, double conf, double* lo, double* hi);

}  // namespace ksk::special

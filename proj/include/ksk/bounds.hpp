#pragma once

#include "ksk/geometry.hpp"

namespace ksk::bounds {

struct BoundParams {
    double beta;  // > 1 (> d for moment integrals); the envelope uses beta = d + alpha
    int d = 1;
};

// Comparison profile (1+|z|)^{-1-beta} (min_chord(z)+1)^{1-beta}.
double comparison(const PhasePoint& z, const BoundParams& p);

// Same quantity through the explicit three-case split on <x,v> vs 0 and |v|^2.
double comparison_piecewise(const PhasePoint& z, const BoundParams& p);

// Chord weight (min_chord(z)+1)^{1-beta}.
double chord_weight(const PhasePoint& z, const BoundParams& p);

// int_0^1 (|x - s v| + 1)^{-beta} ds, adaptive quadrature, rel tol 1e-8,
// split at the chord minimizer. Throws AccuracyError on budget exhaustion.
double chord_integral(const PhasePoint& z, const BoundParams& p);

struct MomentResult {
    bool divergent;
    double value;  // meaningful only when !divergent
};

// int_{R^d} |x|^q * comparison((x,v), beta) dx. Divergence (q >= 2 beta - d)
// decided analytically, never by quadrature. Finite values by reduction to a
// (x1, radial) integral, adaptive quadrature to rel tol 1e-6, truncation
// certified by a closed-form power-law tail bound.
MomentResult moment_integral(const Vec& v, double q, const BoundParams& p);

// Alternative closed two-sided comparator. d = 1: the
// (1+|x|+|v|)^{-2-alpha} (1+(|2x-v|-|v|)_+)^{-alpha} profile; d >= 2: the
// general form with the |x| sqrt(1-w^2) rejection term, beta = d + alpha.
double alt_comparator(const PhasePoint& z, double alpha);

struct EnvelopeParams {
    double kappa0 = 1.0;
    double kappa1 = 1.0;
    double t = 1.0;
    double alpha = 1.0;
    int d = 1;
};

struct Envelope {
    double lower;        // defined only for jx = jv = 0
    double upper_shape;  // gradient envelope shape (unknown constant omitted)
};

// c0* = int_{|y|>1/3} |y|^{-d-alpha} dy.
double tail_mass_constant(int d, double alpha);

// Two-sided envelope shapes at z for the kernel started from z0. Both sides
// carry the unknown comparability constant; callers fit it empirically.
Envelope heat_kernel_envelope(const PhasePoint& z0, const PhasePoint& z,
                              const EnvelopeParams& e, int jx = 0, int jv = 0);

}  // namespace ksk::bounds

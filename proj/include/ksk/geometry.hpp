#pragma once

#include "ksk/vec.hpp"

namespace ksk {

// A point z = (x,v) in 2d-dimensional phase space.
struct PhasePoint {
    Vec x;  // position, length d
    Vec v;  // velocity, length d

    PhasePoint() = default;
    PhasePoint(Vec x_, Vec v_);
    static PhasePoint zero(int d) { return PhasePoint(Vec(d, 0.0), Vec(d, 0.0)); }
    static PhasePoint of(double x, double v) { return PhasePoint({x}, {v}); }

    int dim() const { return static_cast<int>(x.size()); }
    double abs() const { return std::sqrt(norm2(x) + norm2(v)); }
};

// Backward transport characteristic x - s*v.
Vec chord(const PhasePoint& z, double s);

// Anisotropic dilation (t^{-1/alpha-1} x, t^{-1/alpha} v). t must be positive.
PhasePoint dilate(const PhasePoint& z, double t, double alpha);

// Shear (x + t*v, v); shear(shear(z,t),-t) == z.
PhasePoint shear(const PhasePoint& z, double t);

struct ChordMin {
    double s_star;  // minimizer in [0,1]
    double value;   // inf_{s in [0,1]} |x - s v|
};

// Closed-form minimizer of |chord(z,s)| on [0,1]: the projection
// s0 = <x,v>/|v|^2 clamped to [0,1] (s0 := 0 when v = 0).
ChordMin min_chord(const PhasePoint& z);

}  // namespace ksk

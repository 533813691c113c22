#include "ksk/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace ksk {

PhasePoint::PhasePoint(Vec x_, Vec v_) : x(std::move(x_)), v(std::move(v_)) {
    if (x.empty() || x.size() != v.size())
        throw std::invalid_argument("PhasePoint: x and v must have equal length >= 1");
    if (!all_finite(x) || !all_finite(v))
        throw std::invalid_argument("PhasePoint: components must be finite");
}

Vec chord(const PhasePoint& z, double s) { return axpy(z.x, -s, z.v); }

PhasePoint dilate(const PhasePoint& z, double t, double alpha) {
    if (!(t > 0.0)) throw std::domain_error("dilate: t must be positive");
    double cx = std::pow(t, -1.0 / alpha - 1.0);
    double cv = std::pow(t, -1.0 / alpha);
    return PhasePoint(cx * z.x, cv * z.v);
}

PhasePoint shear(const PhasePoint& z, double t) { return PhasePoint(axpy(z.x, t, z.v), z.v); }

ChordMin min_chord(const PhasePoint& z) {
    double vv = norm2(z.v);
    double s0 = vv > 0.0 ? dot(z.x, z.v) / vv : 0.0;
    double s = std::clamp(s0, 0.0, 1.0);
    return {s, norm(chord(z, s))};
}

}  // namespace ksk

#include "ksk/levy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ksk/quad.hpp"
#include "ksk/special.hpp"

namespace ksk::levy {

namespace {

using special::cos_compensated;
using special::sin_compensated;
using special::sin_tail;

constexpr double kInf = HUGE_VAL;

// A(u; lo, hi) = int_lo^hi (1 - cos(ru)) r^{-1-alpha} dr, even in u
double radial_cos(double u, double alpha, double lo, double hi) {
    u = std::abs(u);
    if (u == 0.0) return 0.0;
    double upper = std::isinf(hi) ? special::stable_cos_constant(alpha)
                                  : cos_compensated(u * hi, alpha);
    return std::pow(u, alpha) * (upper - cos_compensated(u * lo, alpha));
}

// B(u; lo, hi) = int_lo^hi (r u 1_{r<=1} - sin(ru)) r^{-1-alpha} dr, odd in u
double radial_sin(double u, double alpha, double lo, double hi) {
    if (u == 0.0) return 0.0;
    double sgn = u > 0.0 ? 1.0 : -1.0;
    u = std::abs(u);
    double out = 0.0;
    double mid = std::min(hi, 1.0);
    if (lo < mid)  // compensated piece, r <= 1
        out += sin_compensated(u * mid, alpha) - sin_compensated(u * lo, alpha);
    if (hi > 1.0) {  // pure -sin piece, r > 1
        double a = std::max(lo, 1.0);
        double upper = std::isinf(hi) ? 0.0 : sin_tail(u * hi, alpha);
        out += upper - sin_tail(u * a, alpha);
    }
    return sgn * std::pow(u, alpha) * out;
}

// orthonormal completion of e1 = unit
void basis_from(const Vec& unit, Vec& e2, Vec& e3) {
    int d = static_cast<int>(unit.size());
    Vec trial(d, 0.0);
    trial[std::abs(unit[0]) < 0.9 ? 0 : 1] = 1.0;
    e2 = axpy(trial, -dot(trial, unit), unit);
    e2 = (1.0 / norm(e2)) * e2;
    if (d >= 3) {
        e3.assign(d, 0.0);
        // cross-product pattern only well-defined for d == 3
        e3[0] = unit[1] * e2[2] - unit[2] * e2[1];
        e3[1] = unit[2] * e2[0] - unit[0] * e2[2];
        e3[2] = unit[0] * e2[1] - unit[1] * e2[0];
    }
}

}  // namespace

LevyKernel LevyKernel::isotropic(int d, double alpha, double kappa) {
    LevyKernel k;
    k.d_ = d;
    k.alpha_ = alpha;
    k.multiplier_ = kappa;
    k.kappa0_ = kappa;
    k.kappa1_ = kappa;
    k.even_ = true;
    k.iso_c_ = special::isotropic_exponent_constant(d, alpha);
    k.validate();
    return k;
}

LevyKernel LevyKernel::angular(int d, double alpha, AngularFn fn, double kappa0,
                               double kappa1, bool even_symmetric) {
    if (d < 2) throw std::domain_error("angular kernels need d >= 2 (d = 1 admits only constants)");
    LevyKernel k;
    k.d_ = d;
    k.alpha_ = alpha;
    k.angular_fn_ = std::move(fn);
    k.kappa0_ = kappa0;
    k.kappa1_ = kappa1;
    k.even_ = even_symmetric;
    k.iso_c_ = special::isotropic_exponent_constant(d, alpha);
    k.validate();
    return k;
}

LevyKernel LevyKernel::banded(int d, double alpha, RadialBands bands, double kappa0,
                              double kappa1) {
    if (bands.values.size() != bands.edges.size() + 1)
        throw std::invalid_argument("RadialBands: need edges.size()+1 values");
    LevyKernel k;
    k.d_ = d;
    k.alpha_ = alpha;
    k.bands_ = std::move(bands);
    k.kappa0_ = kappa0;
    k.kappa1_ = kappa1;
    k.even_ = true;
    k.iso_c_ = special::isotropic_exponent_constant(d, alpha);
    k.validate();
    return k;
}

LevyKernel LevyKernel::builtin(const std::string& name, int d, double alpha) {
    if (name == "constant") return isotropic(d, alpha, 1.0);
    if (name == "band-demo")
        return banded(d, alpha, RadialBands{{1.0 / 3.0, 1.0}, {1.0, 1.5, 1.0}}, 1.0, 1.5);
    if (name == "even-demo")
        return angular(
            d, alpha, [](const Vec& w) { return 1.0 + 0.5 * (2.0 * w[0] * w[0] - 1.0); },
            0.5, 1.5, true);
    if (name == "nonsym-demo")
        return angular(
            d, alpha,
            [](const Vec& w) { return 1.0 + 0.5 * std::cos(3.0 * std::atan2(w[1], w[0])); },
            0.5, 1.5, false);
    throw std::invalid_argument("unknown builtin kernel: " + name);
}

LevyKernel LevyKernel::restricted(double r_lo, double r_hi) const {
    if (!(r_lo >= 0.0 && r_hi > r_lo)) throw std::domain_error("restricted: bad band");
    LevyKernel k = *this;
    k.r_lo_ = std::max(r_lo_, r_lo);
    k.r_hi_ = std::min(r_hi_, r_hi);
    return k;
}

double LevyKernel::kappa_at(const Vec& x) const {
    double r = norm(x);
    if (r == 0.0) throw std::domain_error("kappa_at: x must be nonzero");
    double k = multiplier_;
    if (angular_fn_) k *= angular_fn_((1.0 / r) * x);
    std::size_t i = 0;
    while (i < bands_.edges.size() && r > bands_.edges[i]) ++i;
    return k * bands_.values[i];
}

void LevyKernel::validate() const {
    if (d_ < 1) throw std::domain_error("LevyKernel: d must be >= 1");
    if (!(alpha_ > 0.0 && alpha_ < 2.0)) throw std::domain_error("LevyKernel: alpha in (0,2)");
    if (!(kappa0_ > 0.0 && kappa0_ <= kappa1_))
        throw std::domain_error("LevyKernel: need 0 < kappa0 <= kappa1");
    // deterministic sample of radii and sphere points: bound check plus the
    // spherical odd-moment condition to quadrature tolerance
    const double radii[3] = {0.4, 1.0, 2.5};
    std::vector<Vec> dirs;
    if (d_ == 1) {
        dirs = {{1.0}, {-1.0}};
    } else if (d_ == 2) {
        for (int i = 0; i < 64; ++i) {
            double th = 2.0 * M_PI * i / 64;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    } else {
        const auto& rule = quad::gauss_legendre(16);
        for (int i = 0; i < 16; ++i) {
            double c = rule.nodes[i], s = std::sqrt(1.0 - c * c);
            for (int j = 0; j < 16; ++j) {
                double ph = 2.0 * M_PI * j / 16;
                Vec w(d_, 0.0);
                w[0] = c;
                w[1] = s * std::cos(ph);
                w[2] = s * std::sin(ph);
                dirs.push_back(w);
            }
        }
    }
    for (double r : radii) {
        Vec moment(d_, 0.0);
        double wsum = 0.0;
        for (std::size_t k = 0; k < dirs.size(); ++k) {
            Vec x = r * dirs[k];
            double val = kappa_at(x);
            if (val < kappa0_ - 1e-9 || val > kappa1_ + 1e-9)
                throw std::domain_error("LevyKernel: kappa escapes [kappa0, kappa1]");
            double w = 1.0;
            if (d_ == 3) w = quad::gauss_legendre(16).weights[k / 16];
            wsum += w;
            for (int i = 0; i < d_; ++i) moment[i] += w * val * dirs[k][i];
        }
        if (norm(moment) / wsum > 1e-8 * kappa1_)
            throw std::domain_error("LevyKernel: spherical odd-moment condition violated");
    }
}

std::complex<double> LevyKernel::psi(const Vec& xi) const {
    if (static_cast<int>(xi.size()) != d_) throw std::invalid_argument("psi: dimension mismatch");
    if (!all_finite(xi)) throw std::invalid_argument("psi: xi must be finite");
    double xn = norm(xi);
    if (xn == 0.0) return {0.0, 0.0};

    // fast closed form: isotropic single full band
    if (!angular_fn_ && bands_.edges.empty() && r_lo_ == 0.0 && std::isinf(r_hi_))
        return {multiplier_ * bands_.values[0] * iso_c_ * std::pow(xn, alpha_), 0.0};

    if (r_lo_ >= r_hi_) return {0.0, 0.0};  // empty support after restriction

    // band edges merged with the support restriction
    std::vector<double> edges{r_lo_};
    for (double e : bands_.edges)
        if (e > r_lo_ && e < r_hi_) edges.push_back(e);
    edges.push_back(r_hi_);
    auto band_value = [&](std::size_t b) {
        double probe = std::isinf(edges[b + 1]) ? edges[b] + 1.0
                                                : 0.5 * (edges[b] + edges[b + 1]);
        std::size_t i = 0;
        while (i < bands_.edges.size() && probe > bands_.edges[i]) ++i;
        return bands_.values[i];
    };

    auto radial_re = [&](double u) {
        double s = 0.0;
        for (std::size_t b = 0; b + 1 < edges.size(); ++b)
            s += band_value(b) * radial_cos(u, alpha_, edges[b], edges[b + 1]);
        return s;
    };
    auto radial_im = [&](double u) {
        double s = 0.0;
        for (std::size_t b = 0; b + 1 < edges.size(); ++b)
            s += band_value(b) * radial_sin(u, alpha_, edges[b], edges[b + 1]);
        return s;
    };

    if (!angular_fn_) {
        // radially symmetric: reduce the sphere integral to the first-coordinate
        // marginal; Im vanishes by symmetry
        if (d_ == 1) return {multiplier_ * 2.0 * radial_re(xn), 0.0};
        double ring = special::sphere_area(d_ - 1);
        auto f = [&](double th) {
            return ring * std::pow(std::cos(th), d_ - 2) * radial_re(xn * std::sin(th));
        };
        double re = quad::adaptive(f, 0.0, 0.5 * M_PI, 1e-8, 1e-300) * 2.0;
        return {multiplier_ * re, 0.0};
    }

    // anisotropic: quadrature over the sphere, kink directions (xi.w = 0) split
    Vec e1 = (1.0 / xn) * xi;
    if (d_ == 2) {
        Vec e2{-e1[1], e1[0]};
        auto point = [&](double th) {
            return axpy(std::cos(th) * e1, std::sin(th), e2);
        };
        auto re_f = [&](double th) {
            Vec w = point(th);
            return angular_fn_(w) * radial_re(xn * std::cos(th));
        };
        double re = quad::adaptive(re_f, -0.5 * M_PI, 0.5 * M_PI, 1e-8, 1e-300) +
                    quad::adaptive(re_f, 0.5 * M_PI, 1.5 * M_PI, 1e-8, 1e-300);
        double im = 0.0;
        if (!even_) {
            auto im_f = [&](double th) {
                Vec w = point(th);
                return angular_fn_(w) * radial_im(xn * std::cos(th));
            };
            im = quad::adaptive(im_f, -0.5 * M_PI, 0.5 * M_PI, 1e-8, 1e-300) +
                 quad::adaptive(im_f, 0.5 * M_PI, 1.5 * M_PI, 1e-8, 1e-300);
        }
        return {multiplier_ * re, multiplier_ * im};
    }
    if (d_ == 3) {
        Vec e2, e3;
        basis_from(e1, e2, e3);
        const int m_az = 64;
        auto ring_avg = [&](double th, bool imag_part) {
            double c = std::cos(th), s = std::sin(th);
            double acc = 0.0;
            for (int j = 0; j < m_az; ++j) {
                double ph = 2.0 * M_PI * j / m_az;
                Vec w = axpy(axpy(c * e1, s * std::cos(ph), e2), s * std::sin(ph), e3);
                acc += angular_fn_(w);
            }
            double avg = acc * (2.0 * M_PI / m_az);
            return avg * s * (imag_part ? radial_im(xn * c) : radial_re(xn * c));
        };
        auto re_f = [&](double th) { return ring_avg(th, false); };
        double re = quad::adaptive(re_f, 0.0, 0.5 * M_PI, 1e-8, 1e-300) +
                    quad::adaptive(re_f, 0.5 * M_PI, M_PI, 1e-8, 1e-300);
        double im = 0.0;
        if (!even_) {
            auto im_f = [&](double th) { return ring_avg(th, true); };
            im = quad::adaptive(im_f, 0.0, 0.5 * M_PI, 1e-8, 1e-300) +
                 quad::adaptive(im_f, 0.5 * M_PI, M_PI, 1e-8, 1e-300);
        }
        return {multiplier_ * re, multiplier_ * im};
    }
    throw std::domain_error("anisotropic psi implemented for d <= 3");
}

double LevyKernel::mass(double lo, double hi) const {
    lo = std::max(lo, r_lo_);
    hi = std::min(hi, r_hi_);
    if (!(hi > lo)) return 0.0;
    // angular average of kappa
    double avg;
    if (!angular_fn_) {
        avg = special::sphere_area(d_);
    } else if (d_ == 2) {
        auto f = [&](double th) { return angular_fn_({std::cos(th), std::sin(th)}); };
        avg = quad::adaptive(f, 0.0, 2.0 * M_PI, 1e-10, 1e-300);
    } else if (d_ == 3) {
        auto f = [&](double th) {
            double acc = 0.0;
            for (int j = 0; j < 128; ++j) {
                double ph = 2.0 * M_PI * j / 128;
                double s = std::sin(th);
                acc += angular_fn_({std::cos(th), s * std::cos(ph), s * std::sin(ph)});
            }
            return std::sin(th) * acc * (2.0 * M_PI / 128);
        };
        avg = quad::adaptive(f, 0.0, M_PI, 1e-10, 1e-300);
    } else {
        throw std::domain_error("mass: anisotropic kernels implemented for d <= 3");
    }
    // radial piece per band: int r^{-1-alpha} dr is elementary
    std::vector<double> edges{lo};
    for (double e : bands_.edges)
        if (e > lo && e < hi) edges.push_back(e);
    edges.push_back(hi);
    auto band_value = [&](double r) {
        std::size_t i = 0;
        while (i < bands_.edges.size() && r > bands_.edges[i]) ++i;
        return bands_.values[i];
    };
    double s = 0.0;
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        double a = edges[b], c = edges[b + 1];
        double seg = (std::pow(a, -alpha_) - (std::isinf(c) ? 0.0 : std::pow(c, -alpha_))) / alpha_;
        s += band_value(std::min(0.5 * (a + c), a + 1.0)) * seg;
    }
    return multiplier_ * avg * s;
}

std::complex<double> kinetic_exponent(const Exponent& e, const Vec& xi, const Vec& eta,
                                      double t) {
    if (!(t > 0.0)) throw std::domain_error("kinetic_exponent: t must be positive");
    double xx = norm2(xi);
    double split = xx > 0.0 ? std::clamp(-dot(xi, eta) / xx, 0.0, t) : 0.0;

    auto integrate = [&](int n) {
        const auto& rule = quad::gauss_legendre(n);
        std::complex<double> acc{0.0, 0.0};
        auto panel = [&](double a, double b) {
            if (b <= a) return;
            double h = 0.5 * (b - a), c = 0.5 * (a + b);
            for (int i = 0; i < n; ++i)
                acc += h * rule.weights[i] * e.psi(axpy(eta, c + h * rule.nodes[i], xi));
        };
        // panels graded toward the split point, where |s xi + eta| may vanish
        // and the integrand loses smoothness
        const double grade[4] = {0.02, 0.14, 0.45, 1.0};
        auto seg = [&](double from, double to) {  // `from` is the split end
            double prev = from;
            for (double g : grade) {
                double next = from + g * (to - from);
                if (from < to)
                    panel(prev, next);
                else
                    panel(next, prev);
                prev = next;
            }
        };
        seg(split, 0.0);
        seg(split, t);
        return acc;
    };

    std::complex<double> prev = integrate(8);
    for (int n = 16; n <= 128; n *= 2) {
        std::complex<double> cur = integrate(n);
        if (std::abs(cur - prev) <= 1e-9 * std::abs(cur) + 1e-300) {
            prev = cur;
            break;
        }
        prev = cur;
    }
    if (prev.real() < 0.0) prev.real(0.0);  // Re phi >= 0 up to roundoff
    return prev;
}

JumpSplit split_measure(const LevyKernel& k) {
    JumpSplit out{k.restricted(0.0, 1.0), k.restricted(1.0, kInf), 0.0};
    out.lambda = k.mass(1.0, kInf);
    return out;
}

std::vector<Vec> decompose_vector(const Vec& u, int n) {
    if (n < 2) throw std::domain_error("decompose_vector: n must be >= 2");
    double un = norm(u);
    if (un > static_cast<double>(n))
        throw std::domain_error("decompose_vector: |u| must not exceed n");
    int d = static_cast<int>(u.size());
    auto unit_dir = [&](const Vec& w) {
        double wn = norm(w);
        if (wn > 0.0) return (1.0 / wn) * w;
        Vec e(d, 0.0);
        e[0] = 1.0;  // tie-break for w = 0
        return e;
    };
    std::vector<Vec> parts;
    Vec rest = u;
    for (int m = n; m > 2; --m) {
        parts.push_back(unit_dir(rest));  // peel a unit vector, |rest| drops to ||rest|-1|
        rest = rest - parts.back();
    }
    double rn = norm(rest);
    if (rn <= 2.0 / 3.0) {
        Vec u1 = (-1.0 / 3.0) * unit_dir(rest);
        parts.push_back(u1);
        parts.push_back(rest - u1);
    } else {
        parts.push_back(0.5 * rest);
        parts.push_back(0.5 * rest);
    }
    return parts;
}

}  // namespace ksk::levy

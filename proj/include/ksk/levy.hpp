#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ksk/vec.hpp"

namespace ksk::levy {

// Characteristic exponent interface: E e^{i xi.L_t} = e^{-t psi(xi)}.
class Exponent {
 public:
    virtual ~Exponent() = default;
    virtual std::complex<double> psi(const Vec& xi) const = 0;
    virtual int dim() const = 0;
    // power p with Re psi ~ |xi|^p at high frequency (truncation control)
    virtual double decay_power() const = 0;
};

// psi(xi) = |xi|^2: Brownian velocity surrogate, the closed-form oracle case.
class QuadraticExponent final : public Exponent {
 public:
    explicit QuadraticExponent(int d) : d_(d) {}
    std::complex<double> psi(const Vec& xi) const override { return {norm2(xi), 0.0}; }
    int dim() const override { return d_; }
    double decay_power() const override { return 2.0; }

 private:
    int d_;
};

// Piecewise-constant radial profile: value values[i] on (edges[i-1], edges[i]],
// with edges[-1] := 0 and a final band extending to infinity.
struct RadialBands {
    std::vector<double> edges;   // strictly increasing, may be empty
    std::vector<double> values;  // size edges.size() + 1
};

// Jump kernel kappa(x)/|x|^{d+alpha} with kappa = multiplier * angular(xhat)
// * radial(|x|), restricted to |x| in (r_lo, r_hi]. Angular profiles must keep
// the spherical odd-moment condition; radial structure is piecewise constant
// so the oscillatory radial integrals stay exactly computable.
class LevyKernel final : public Exponent {
 public:
    using AngularFn = std::function<double(const Vec&)>;  // on the unit sphere

    static LevyKernel isotropic(int d, double alpha, double kappa = 1.0);
    static LevyKernel angular(int d, double alpha, AngularFn fn, double kappa0,
                              double kappa1, bool even_symmetric);
    static LevyKernel banded(int d, double alpha, RadialBands bands, double kappa0,
                             double kappa1);
    // named demo kernels: "constant", "even-demo", "nonsym-demo", "band-demo"
    static LevyKernel builtin(const std::string& name, int d, double alpha);

    // copy with the support restricted to r_lo < |x| <= r_hi
    LevyKernel restricted(double r_lo, double r_hi) const;

    std::complex<double> psi(const Vec& xi) const override;
    int dim() const override { return d_; }
    double decay_power() const override { return alpha_; }

    double alpha() const { return alpha_; }
    double kappa0() const { return kappa0_; }
    double kappa1() const { return kappa1_; }
    bool even_symmetric() const { return even_; }
    bool is_isotropic() const { return !angular_fn_; }
    double r_lo() const { return r_lo_; }
    double r_hi() const { return r_hi_; }
    const RadialBands& bands() const { return bands_; }

    // kappa(x) (without the band indicator); x != 0
    double kappa_at(const Vec& x) const;
    // nu mass of {lo < |x| <= hi} intersected with the kernel band
    double mass(double lo, double hi) const;
    // c(d,alpha): isotropic psi is c * kappa * |xi|^alpha
    double iso_constant() const { return iso_c_; }

 private:
    LevyKernel() = default;
    void validate() const;

    int d_ = 1;
    double alpha_ = 1.0;
    double multiplier_ = 1.0;
    AngularFn angular_fn_;  // null -> radially symmetric
    RadialBands bands_{{}, {1.0}};
    double kappa0_ = 1.0, kappa1_ = 1.0;
    bool even_ = true;
    double r_lo_ = 0.0, r_hi_ = HUGE_VAL;
    double iso_c_ = 0.0;
};

// phi(xi,eta,t) = int_0^t psi(s xi + eta) ds; Gauss-Legendre with the node
// count doubled until the relative change drops below 1e-9.
std::complex<double> kinetic_exponent(const Exponent& e, const Vec& xi, const Vec& eta,
                                      double t);

struct JumpSplit {
    LevyKernel small;  // nu restricted to |x| <= 1
    LevyKernel large;  // nu restricted to |x| > 1
    double lambda;     // large-jump mass nu({|x|>1})
};

JumpSplit split_measure(const LevyKernel& k);

// Splits u (|u| <= n) into n vectors with norms in [1/3,1] summing to u.
std::vector<Vec> decompose_vector(const Vec& u, int n);

}  // namespace ksk::levy

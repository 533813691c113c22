#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ksk/geometry.hpp"
#include "ksk/levy.hpp"

namespace ksk::kern {

// Grid configuration rejected (frequency extent below the truncation radius
// the exponent's decay demands, odd node counts, ...).
class ConfigError : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

// phi(xi, eta) = int_0^t psi(s xi + eta) ds with closed forms for the
// quadratic surrogate and d = 1 isotropic stable kernels, adaptive quadrature
// otherwise.
class KineticPhase {
 public:
    KineticPhase(const levy::Exponent& e, double t);
    std::complex<double> operator()(const Vec& xi, const Vec& eta) const;
    std::complex<double> eval1(double xi, double eta) const;  // d = 1 fast path
    double t() const { return t_; }
    const levy::Exponent& exponent() const { return *e_; }

 private:
    enum class Mode { Quadratic, Iso1d, IsoNd, Generic };
    const levy::Exponent* e_;
    double t_;
    Mode mode_;
    double iso_scale_ = 0.0;  // c(d,alpha) * kappa for Iso1d
    double alpha_ = 0.0;
};

// Frequency-truncation radius R such that the mass of e^{-Re phi} beyond R is
// below tail_rel of a conservative estimate of its total. The decay constant
// in Re phi >= c (|w|^2 ^ |w|^p) is estimated by sampling on spheres.
double suggest_truncation(const levy::Exponent& e, double t, double tail_rel = 1e-8);

// Per-axis slab radii W_a with Re phi >= c_a |w_a|^p certified by direction
// sampling; the spectrum mass in each slab {|w_a| > W_a} is below tail_rel.
// Size 2d, x-frequency axes first. The decay is anisotropic in (xi, eta), so
// per-axis radii are much cheaper than one radial bound.
std::vector<double> suggest_truncation_axes(const levy::Exponent& e, double t,
                                            double tail_rel = 1e-8);

struct GridAxis {
    int n;        // even node count
    double step;  // spacing; coordinates (i - n/2) * step
};

struct GridSpec {
    std::vector<GridAxis> axes;  // size 2d: x axes then v axes
};

// Heat-kernel values on an origin-centered uniform phase-space grid,
// evaluated by FFT of the sampled characteristic function.
class DensityGrid {
 public:
    double t = 0.0;
    double alpha = 0.0;  // 2 for the quadratic surrogate
    int d = 1;
    int jx = 0, jv = 0;  // spectral derivative orders
    std::vector<GridAxis> axes;
    std::vector<double> values;  // row-major, raw (tiny negative ringing kept)
    double mass = 0.0;           // quadrature of values (jx = jv = 0 only)
    // meta
    std::vector<double> freq_extent;  // per-axis frequency half-width
    double max_imag = 0.0;            // largest |Im| discarded, diagnostics
    std::size_t nodes = 0;

    double coord(int axis, int index) const { return (index - axes[axis].n / 2) * axes[axis].step; }
    std::size_t index_of(const std::vector<int>& idx) const;
    double value_at(const std::vector<int>& idx) const { return values[index_of(idx)]; }
    // d = 1 accessors
    double at(int ix, int iv) const { return values[static_cast<std::size_t>(ix) * axes[1].n + iv]; }
    double clamped_at(int ix, int iv) const { return std::max(at(ix, iv), 0.0); }
    double cell_volume() const;
};

DensityGrid density_grid(const levy::Exponent& e, double t, const GridSpec& spec,
                         int jx = 0, int jv = 0);

// Pointwise inversion p_t(z) = (2pi)^{-2d} int e^{-i w.z} e^{-phi(w)} dw.
// d = 1 is the intended use; d >= 2 runs a tensor rule under a node budget and
// throws AccuracyError when its refinement estimate misses 1e-4.
double density_point(const levy::Exponent& e, double t, const PhasePoint& z);

// Spectral derivative d^jx/dx d^jv/dv of the density (multiplier
// (-i xi)^jx (-i eta)^jv before inversion), jx + jv <= 2.
double density_gradient(const levy::Exponent& e, double t, const PhasePoint& z, int jx,
                        int jv);

// Closed-form kinetic Gaussian: the law of (int_0^t B_s ds, B_t) with
// velocity generator Delta_v, started from z0. Per coordinate
// Var X = 2t^3/3, Cov(X,V) = t^2, Var V = 2t.
double kolmogorov_density(const PhasePoint& z0, const PhasePoint& z, double t);

// p_t(z0, z) = p_t(0, z - shear(z0, t)).
double density_from(const levy::Exponent& e, double t, const PhasePoint& z0,
                    const PhasePoint& z);

// Shared-table evaluator for many points with one exponent (d = 1): builds the
// weighted integrand table once, then each eval is two (or four) passes of
// trigonometric sums. Thread-safe after construction.
class PointEvaluator {
 public:
    PointEvaluator(const levy::Exponent& e, double t, double max_x, double max_v,
                   double tail_rel = 1e-9, int jx = 0, int jv = 0);
    double eval(double x, double v) const;
    double truncation_radius() const { return radius_; }
    // conservative absolute scale of quadrature noise in eval()
    double noise_floor() const { return noise_; }

 private:
    std::vector<double> xi_, eta_;
    std::vector<double> fr_, fi_;  // weighted integrand, row-major (xi major)
    bool have_imag_ = false;
    double radius_ = 0.0, noise_ = 0.0;
};

// Serialization. CSV columns: coordinates then value; binary layout
// documented in README (magic "KSKD", version, d, t, alpha, axes,
// little-endian row-major float64 values).
void write_csv(const DensityGrid& g, const std::string& path, const std::string& header);
void write_binary(const DensityGrid& g, const std::string& path);
DensityGrid read_binary(const std::string& path);

}  // namespace ksk::kern

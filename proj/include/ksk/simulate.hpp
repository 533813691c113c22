#pragma once

#include <cstdint>
#include <vector>

#include "ksk/geometry.hpp"
#include "ksk/levy.hpp"
#include "ksk/rng.hpp"

namespace ksk::sim {

enum class SmallJumpScheme { Truncate, GaussianCompensate, EulerMesh };

struct SimConfig {
    std::uint64_t seed = 1;
    long n_paths = 1000;
    double eps = 0.01;  // small-jump cutoff in (0,1]
    SmallJumpScheme scheme = SmallJumpScheme::GaussianCompensate;
    int euler_mesh = 64;  // Riemann mesh for the EulerMesh scheme
    double t = 1.0;
};

// One trajectory of (X_t, V_t) = (int_0^t L_s ds, L_t). Jumps above the
// cutoff are exact; the sub-cutoff remainder is carried separately.
struct PathSample {
    std::vector<double> jump_times;  // increasing, in [0,t]
    std::vector<Vec> jump_sizes;
    Vec V;        // L_t
    Vec X;        // int_0^t L_s ds; jump part exact, each jump y at tau adds y (t - tau)
    Vec small_V;  // approximation part per the scheme
    Vec small_X;
    SmallJumpScheme scheme = SmallJumpScheme::Truncate;
};

// One increment of the isotropic alpha-stable law matching the kernel's
// characteristic exponent over time dt. d = 1 uses the trigonometric
// transform; d >= 2 Gaussian subordination. Radially-banded even kernels fall
// back to a jump-sum approximation (compound Poisson above a small cutoff
// plus a matched Gaussian); non-even kernels are rejected.
Vec sample_stable_increment(const levy::LevyKernel& k, double dt, CounterRng& rng);

// Jump drawn from the normalized restriction of nu to r_lo < |x| <= r_hi
// (intersected with the kernel band): radius by inverse CDF of the pure power,
// direction uniform, joint rejection against kappa/kappa1.
Vec sample_mu(const levy::LevyKernel& k, double r_lo, double r_hi, CounterRng& rng);

PathSample sample_kinetic_path(const levy::LevyKernel& k, const SimConfig& cfg,
                               CounterRng& rng);

struct Cube {
    PhasePoint center;
    double r = 1.0;
};

struct CubeProbability {
    double estimate = 0.0;
    double stderr_total = 0.0;
    double truncation_bound = 0.0;  // exact Poisson tail beyond n_max
    std::vector<double> terms;      // I_n estimates, n = 1..n_max
    std::vector<double> term_stderr;
};

// P(Z_1^{(1)} in Q_r(z)) by the I_n series: term n weighted
// lambda^n e^-lambda / n!, indicator estimated from m_per_term draws of
// (s_1..s_n, y_1..y_n), independent streams per term.
CubeProbability large_jump_cube_probability(const levy::LevyKernel& k, const Cube& cube,
                                            int n_max, long m_per_term, std::uint64_t seed);

struct TailDecay {
    std::vector<double> radii;
    std::vector<double> prob;
    std::vector<long> hits;
    std::vector<bool> censored;  // too few hits to trust the estimate
    double slope = 0.0;          // log P vs (R+2) log(R+2), non-censored radii
    bool monotone = false;
};

// Empirical tail of |Z_1^{(0)}| (small-jump part, kappa == 1 required).
TailDecay small_jump_tail_check(const levy::LevyKernel& k, const SimConfig& cfg,
                                const std::vector<double>& radii);

struct HistogramSpec {
    // edge-aligned boxes per axis: box i spans [(i - n/2) step, (i+1 - n/2) step)
    std::vector<int> n;        // 2d entries
    std::vector<double> step;  // 2d entries
};

struct Histogram {
    HistogramSpec spec;
    std::vector<long> counts;     // row-major over boxes
    std::vector<double> density;  // count / (n_samples * box volume)
    std::vector<double> ci_lo, ci_hi;  // exact binomial 95% on the box probability
    long n_samples = 0;
    long outside = 0;  // samples beyond the box domain
    double box_volume = 1.0;
};

Histogram empirical_density(const std::vector<PhasePoint>& samples, const HistogramSpec& spec);

}  // namespace ksk::sim

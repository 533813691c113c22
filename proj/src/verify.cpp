#include "ksk/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

#include "ksk/bounds.hpp"
#include "ksk/kernel.hpp"
#include "ksk/levy.hpp"
#include "ksk/rng.hpp"
#include "ksk/simulate.hpp"
#include "ksk/special.hpp"
#include "ksk/threads.hpp"

namespace ksk::verify {

namespace {

using nlohmann::json;

const char* kNames[] = {
    "theorem_envelope", "gradient_log",       "chord_lemma",    "moment_lemma",
    "large_jump_lemma", "grube_d1",           "scaling_exact",  "conditional_moment",
    "small_jump_tail",  "decompose_lemma",    "kolmogorov_oracle",
};

// streaming min/max + reservoir sample for percentiles
class RatioSampler {
 public:
    explicit RatioSampler(std::uint64_t seed, std::size_t cap = 200000)
        : rng_(seed, 0xabcd), cap_(cap) {}
    void add(double r) {
        ++n_;
        min_ = std::min(min_, r);
        max_ = std::max(max_, r);
        if (sample_.size() < cap_) {
            sample_.push_back(r);
        } else {
            std::size_t j = rng_.next_u64() % n_;
            if (j < cap_) sample_[j] = r;
        }
    }
    long count() const { return static_cast<long>(n_); }
    RatioStats stats() {
        RatioStats s;
        if (sample_.empty()) return s;
        std::sort(sample_.begin(), sample_.end());
        auto q = [&](double p) {
            return sample_[std::min(sample_.size() - 1,
                                    static_cast<std::size_t>(p * sample_.size()))];
        };
        s.min = min_;
        s.max = max_;
        s.p1 = q(0.01);
        s.p50 = q(0.50);
        s.p99 = q(0.99);
        return s;
    }

 private:
    CounterRng rng_;
    std::size_t cap_;
    std::vector<double> sample_;
    std::size_t n_ = 0;
    double min_ = HUGE_VAL, max_ = -HUGE_VAL;
};

struct SlopeFit {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    void add(double x, double y) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    double slope() const {
        double den = n * sxx - sx * sx;
        return den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    }
};

int next_pow2(double x) {
    int n = 2;
    while (n < x && n < (1 << 20)) n *= 2;
    return n;
}

// FFT grid sized from the per-axis truncation radii; node counts capped (the
// effective extent then shrinks accordingly)
kern::DensityGrid build_grid(const levy::Exponent& e, double t, double ext_x, double ext_v,
                             int cap_x, int cap_v, double tail_rel, int jx = 0, int jv = 0) {
    auto w = kern::suggest_truncation_axes(e, t, tail_rel);
    kern::GridAxis ax{std::min(next_pow2(2.0 * ext_x * w[0] / M_PI), cap_x), M_PI / w[0]};
    kern::GridAxis av{std::min(next_pow2(2.0 * ext_v * w[1] / M_PI), cap_v), M_PI / w[1]};
    return kern::density_grid(e, t, kern::GridSpec{{ax, av}}, jx, jv);
}

double grid_max(const kern::DensityGrid& g) {
    double m = 0.0;
    for (double v : g.values) m = std::max(m, v);
    return m;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

ComparabilityReport base_report(const CheckSpec& spec) {
    ComparabilityReport r;
    r.check = to_string(spec.name);
    r.seed = spec.seed;
    r.d = spec.d;
    r.alpha = spec.alpha;
    r.t = spec.t;
    r.kernel = spec.kernel;
    r.budget = spec.budget;
    r.ratio_budget = spec.ratio_budget;
    r.tolerance = spec.tolerance;
    return r;
}

// ---------------------------------------------------------------- checks ---

ComparabilityReport check_kolmogorov(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    r.domain = "|x|,|v| <= 3 step 0.25, t in {0.5,1,2}, alpha=2 surrogate";
    levy::QuadraticExponent qe(1);
    RatioSampler ratios(spec.seed);
    double max_rel = 0.0;
    long excluded = 0, total = 0;
    for (double t : {0.5, 1.0, 2.0}) {
        kern::PointEvaluator pe(qe, t, 3.0, 3.0, 5e-14);
        double peak = kern::kolmogorov_density(PhasePoint::zero(1), PhasePoint::zero(1), t);
        // quadrature noise floor: below it a relative comparison is meaningless
        double floor = std::max(1e-9 * peak, 25.0 * pe.noise_floor() / spec.tolerance);
        for (int i = -12; i <= 12; ++i) {
            for (int j = -12; j <= 12; ++j) {
                PhasePoint z = PhasePoint::of(0.25 * i, 0.25 * j);
                double oracle = kern::kolmogorov_density(PhasePoint::zero(1), z, t);
                ++total;
                if (oracle < floor) {
                    ++excluded;
                    continue;
                }
                double val = pe.eval(z.x[0], z.v[0]);
                max_rel = std::max(max_rel, std::abs(val - oracle) / oracle);
                ratios.add(val / oracle);
            }
        }
    }
    r.n_points = ratios.count();
    r.ratio = ratios.stats();
    r.c_lower = r.ratio.min;
    r.c_upper = r.ratio.max;
    r.pass = max_rel <= spec.tolerance && r.n_points > 200;
    r.note = "max rel err " + fmt(max_rel) + "; excluded " + fmt(100.0 * excluded / total) +
             "% of nodes below the evaluability floor";
    return r;
}

ComparabilityReport check_scaling(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    double a = spec.alpha;
    r.domain = "lambda-scaling (2, t=0.5) and self-similarity t=2 vs t=1 on mapped nodes";
    levy::LevyKernel k1 = levy::LevyKernel::isotropic(1, a, 1.0);
    levy::LevyKernel k2 = levy::LevyKernel::isotropic(1, a, 2.0);

    // large extents so the pointwise spot check below is not drowned by the
    // periodization ghosts of the heavy velocity tails
    kern::DensityGrid g1 = a < 0.99 ? build_grid(k1, 1.0, 14.0, 8.0, 8192, 2048, 1e-10)
                                    : build_grid(k1, 1.0, 150.0, 125.0, 8192, 4096, 1e-10);
    double sx = g1.axes[0].step, sv = g1.axes[1].step;
    int nx = g1.axes[0].n, nv = g1.axes[1].n;

    kern::DensityGrid ga = kern::density_grid(
        k2, 0.5, kern::GridSpec{{{nx, 0.5 * sx}, {nv, sv}}});
    double cx = std::pow(2.0, 1.0 / a + 1.0), cv = std::pow(2.0, 1.0 / a);
    kern::DensityGrid gb = kern::density_grid(
        k1, 2.0, kern::GridSpec{{{nx, cx * sx}, {nv, cv * sv}}});
    double self_factor = std::pow(2.0, -2.0 / a - 1.0);

    double pmax = grid_max(g1);
    std::vector<std::pair<int, int>> nodes;
    CounterRng rng(spec.seed, 1);
    while (nodes.size() < 200) {
        int i = static_cast<int>(rng.next_u64() % nx);
        int j = static_cast<int>(rng.next_u64() % nv);
        if (g1.at(i, j) >= 1e-4 * pmax) nodes.emplace_back(i, j);
    }

    RatioSampler ratios(spec.seed);
    double max_rel = 0.0;
    for (auto [i, j] : nodes) {
        double base = g1.at(i, j);
        double ra = ga.at(i, j) / (2.0 * base);
        double rb = gb.at(i, j) / (self_factor * base);
        ratios.add(ra);
        ratios.add(rb);
        max_rel = std::max({max_rel, std::abs(ra - 1.0), std::abs(rb - 1.0)});
    }

    // independent-quadrature spot check against pointwise inversion. Skipped
    // for alpha = 0.5 (the truncation radius makes the point table
    // infeasible); the alpha = 1 spectrum has cone lines that cap the
    // pointwise panel accuracy near 1e-3, so the spot budget is per alpha.
    double max_spot = 0.0;
    double spot_budget = a < 1.2 ? 2e-3 : 2e-4;
    long n_spot = 0;
    if (a >= 0.99) {
        kern::PointEvaluator pe(k1, 1.0, 10.0, 6.0, 1e-10);
        for (auto [i, j] : nodes) {
            if (n_spot >= 25) break;
            double x = g1.coord(0, i), v = g1.coord(1, j);
            if (std::abs(x) > 10.0 || std::abs(v) > 6.0) continue;
            if (g1.at(i, j) < 1e-2 * pmax) continue;
            double p = pe.eval(x, v);
            max_spot = std::max(max_spot, std::abs(p - g1.at(i, j)) / p);
            ++n_spot;
        }
    }

    r.n_points = ratios.count();
    r.ratio = ratios.stats();
    r.c_lower = r.ratio.min;
    r.c_upper = r.ratio.max;
    r.pass = max_rel <= spec.tolerance && (n_spot == 0 || max_spot <= spot_budget);
    r.note = "max identity rel err " + fmt(max_rel) +
             (n_spot ? "; point-quadrature spot err " + fmt(max_spot) : " (spot skipped)");
    return r;
}

// pointwise aliasing model: folded tails estimated through the comparison
// profile scaled by a constant fitted on the core
struct AliasModel {
    double c_env, ext_x, ext_v, beta, t, alpha;
    double profile(double x, double v) const {
        double s = std::pow(t, -2.0 / alpha - 1.0);
        PhasePoint z = PhasePoint::of(x, v);
        PhasePoint w = dilate(z, t, alpha);
        return s * bounds::comparison(w, {beta, 1});
    }
    double operator()(double x, double v) const {
        double gx = 2.0 * ext_x - std::abs(x);
        double gv = 2.0 * ext_v - std::abs(v);
        double worst = 0.0;
        for (double sx : {-1.0, 1.0}) {
            worst = std::max(worst, profile(gx, sx * v));
            worst = std::max(worst, profile(x, sx * gv));
            worst = std::max(worst, profile(gx, sx * gv));
        }
        return c_env * worst;
    }
};

AliasModel fit_alias(const kern::DensityGrid& g, double beta, double alpha, double t) {
    AliasModel m{0.0, 0.5 * g.axes[0].n * g.axes[0].step, 0.5 * g.axes[1].n * g.axes[1].step,
                 beta, t, alpha};
    std::vector<double> core;
    for (int i = 0; i < g.axes[0].n; i += 8) {
        double x = g.coord(0, i);
        if (std::abs(x) > 5.0 * std::pow(t, 1.0 / alpha + 1.0)) continue;
        for (int j = 0; j < g.axes[1].n; j += 8) {
            double v = g.coord(1, j);
            if (std::abs(v) > 5.0 * std::pow(t, 1.0 / alpha)) continue;
            double p = g.at(i, j);
            if (p > 0.0) core.push_back(p / m.profile(x, v));
        }
    }
    if (core.empty()) throw std::runtime_error("alias fit: empty core");
    std::sort(core.begin(), core.end());
    m.c_env = 3.0 * core[static_cast<std::size_t>(0.9 * core.size())];
    return m;
}

ComparabilityReport check_envelope(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    double a = spec.alpha;
    r.domain = "|x| <= 40, |v| <= 10, t=1, kappa=1, ratio p / comparison(1+alpha)";
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, a, 1.0);
    // extents sized against periodization ghosts: the velocity tail decays
    // like (1+|z|)^{-1-beta} along the chord-zero corridor, so the v extent
    // must reach several hundred before |x| <= 40 is clean; alpha = 0.5 tops
    // out at the memory cap and keeps only its feasible core (reported)
    int cap_x = a < 1.3 ? 8192 : 4096;
    int cap_v = a < 1.3 ? 16384 : 8192;
    kern::DensityGrid g = build_grid(k, 1.0, 170.0, 950.0, cap_x, cap_v, 3e-11);

    double beta = 1.0 + a;
    double pmax = grid_max(g);
    AliasModel alias = fit_alias(g, beta, a, 1.0);
    double trunc = 10.0 * 3e-11 * pmax;

    // two passes: collect ratios, then fit the slope on the asymptotic
    // window (top decade of log(1+|z|)), where the exponent is decisive;
    // nearer in, the ratio may drift within its bounded band
    RatioSampler ratios(spec.seed);
    long excluded = 0, total = 0;
    double floor_min = HUGE_VAL, floor_max = 0.0, lmax = 0.0;
    bounds::BoundParams bp{beta, 1};
    const bool literal_floor = std::getenv("KSK_LITERAL_FLOOR") != nullptr;
    auto floor_rule = [&](double x, double v) {
        if (literal_floor) return 1e-9 * pmax;
        return std::max(1e-9 * pmax, 12.0 * (alias(x, v) + trunc));
    };
    auto sweep = [&](auto&& body) {
        for (int i = 0; i < g.axes[0].n; ++i) {
            double x = g.coord(0, i);
            if (std::abs(x) > 40.0) continue;
            for (int j = 0; j < g.axes[1].n; ++j) {
                double v = g.coord(1, j);
                if (std::abs(v) > 10.0) continue;
                body(x, v, g.at(i, j));
            }
        }
    };
    sweep([&](double x, double v, double p) {
        ++total;
        double floor = floor_rule(x, v);
        floor_min = std::min(floor_min, floor);
        floor_max = std::max(floor_max, floor);
        if (p < floor) {
            ++excluded;
            return;
        }
        PhasePoint z = PhasePoint::of(x, v);
        double ratio = p / bounds::comparison(z, bp);
        ratios.add(ratio);
        lmax = std::max(lmax, std::log(1.0 + z.abs()));
    });
    SlopeFit fit_all, fit_tail;
    sweep([&](double x, double v, double p) {
        double floor = floor_rule(x, v);
        if (p < floor) return;
        PhasePoint z = PhasePoint::of(x, v);
        double l = std::log(1.0 + z.abs());
        double y = std::log(p / bounds::comparison(z, bp));
        fit_all.add(l, y);
        if (l >= lmax - 1.1) fit_tail.add(l, y);
    });
    r.n_points = ratios.count();
    r.ratio = ratios.stats();
    r.c_lower = r.ratio.min;
    r.c_upper = r.ratio.max;
    double slope = fit_tail.slope();
    bool spread_ok = r.ratio.max / r.ratio.min <= spec.ratio_budget;
    r.pass = spread_ok && std::abs(slope) <= 0.15 && r.n_points > 1000;
    r.note = "tail slope " + fmt(slope) + " (full-range " + fmt(fit_all.slope()) +
             "); spread " + fmt(r.ratio.max / r.ratio.min) + "; max log(1+|z|) " + fmt(lmax) +
             "; excluded " + fmt(100.0 * excluded / total) + "% (floor " + fmt(floor_min) +
             ".." + fmt(floor_max) + ")";
    return r;
}

ComparabilityReport check_gradient_log(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    double a = spec.alpha;
    r.domain = "|x| <= 40, |v| <= 10 above floor; t in {0.5,1,2}";
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, a, 1.0);
    double beta = 1.0 + a;

    // base grid at t = 1; the t != 1 grids reuse the node counts with the
    // exactly dilated steps, so resolution and ghost structure scale along
    int cap_x = a < 0.8 ? 4096 : (a < 1.3 ? 4096 : 2048);
    int cap_v = a < 0.8 ? 4096 : 2048;
    kern::DensityGrid base = build_grid(k, 1.0, 60.0, 120.0, cap_x, cap_v, 1e-10);

    std::vector<double> kx_all, kv_all;
    for (double t : {0.5, 1.0, 2.0}) {
        double fx = std::pow(t, 1.0 / a + 1.0), fv = std::pow(t, 1.0 / a);
        kern::GridSpec same{{{base.axes[0].n, fx * base.axes[0].step},
                             {base.axes[1].n, fv * base.axes[1].step}}};
        kern::DensityGrid gp = kern::density_grid(k, t, same);
        kern::DensityGrid gx = kern::density_grid(k, t, same, 1, 0);
        kern::DensityGrid gv = kern::density_grid(k, t, same, 0, 1);

        double pmax = grid_max(gp);
        AliasModel alias = fit_alias(gp, beta, a, t);
        double trunc = 10.0 * 1e-10 * pmax;
        double kx = 0.0, kv = 0.0;
        double cx = std::pow(t, 1.0 / a + 1.0), cv = std::pow(t, 1.0 / a);
        for (int i = 0; i < gp.axes[0].n; ++i) {
            double x = gp.coord(0, i);
            if (std::abs(x) > 40.0) continue;
            for (int j = 0; j < gp.axes[1].n; ++j) {
                double v = gp.coord(1, j);
                if (std::abs(v) > 10.0) continue;
                double p = gp.at(i, j);
                double floor =
                    std::max(1e-6 * pmax, 50.0 * (alias(x, v) + trunc));
                if (p < floor) continue;
                kx = std::max(kx, cx * std::abs(gx.at(i, j)) / p);
                kv = std::max(kv, cv * std::abs(gv.at(i, j)) / p);
            }
        }
        kx_all.push_back(kx);
        kv_all.push_back(kv);
    }
    auto spread = [](const std::vector<double>& v) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi / *lo;
    };
    r.n_points = static_cast<long>(kx_all.size() + kv_all.size());
    r.ratio = {std::min(*std::min_element(kx_all.begin(), kx_all.end()),
                        *std::min_element(kv_all.begin(), kv_all.end())),
               0, 0, 0,
               std::max(*std::max_element(kx_all.begin(), kx_all.end()),
                        *std::max_element(kv_all.begin(), kv_all.end()))};
    r.c_lower = spread(kx_all);
    r.c_upper = spread(kv_all);
    r.pass = r.c_lower <= spec.ratio_budget && r.c_upper <= spec.ratio_budget;
    r.note = "K_x(t) = " + fmt(kx_all[0]) + "," + fmt(kx_all[1]) + "," + fmt(kx_all[2]) +
             "; K_v(t) = " + fmt(kv_all[0]) + "," + fmt(kv_all[1]) + "," + fmt(kv_all[2]);
    return r;
}

ComparabilityReport check_chord(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    int d = spec.d;
    r.domain = "random z, |z| log-uniform in [0.1, 100], beta in d + {0.5,1,1.5}";
    RatioSampler ratios(spec.seed);
    CounterRng rng(spec.seed, 17);
    bool pass = true;
    double worst_v0 = 0.0;
    std::string fail;
    for (double db : {0.5, 1.0, 1.5}) {
        bounds::BoundParams bp{d + db, d};
        double bmin = HUGE_VAL, bmax = 0.0;
        for (long m = 0; m < spec.budget; ++m) {
            Vec w(2 * d);
            for (auto& c : w) c = rng.normal();
            double rad = std::pow(10.0, rng.uniform(-1.0, 2.0));
            w = (rad / norm(w)) * w;
            PhasePoint z(Vec(w.begin(), w.begin() + d), Vec(w.begin() + d, w.end()));
            double ratio = bounds::chord_integral(z, bp) * (1.0 + z.abs()) /
                           bounds::chord_weight(z, bp);
            ratios.add(ratio);
            bmin = std::min(bmin, ratio);
            bmax = std::max(bmax, ratio);
        }
        if (std::max(bmax, 1.0 / bmin) > spec.ratio_budget) {
            pass = false;
            fail += " batch(beta=" + fmt(d + db) + ") outside budget;";
        }
        // v = 0 slice: the quadrature must reproduce the constant integrand
        for (int m = 0; m < 50; ++m) {
            Vec x(d);
            for (auto& c : x) c = rng.normal() * 10.0;
            PhasePoint z(x, Vec(d, 0.0));
            double ratio = bounds::chord_integral(z, bp) * (1.0 + z.abs()) /
                           bounds::chord_weight(z, bp);
            worst_v0 = std::max(worst_v0, std::abs(ratio - 1.0));
        }
    }
    if (worst_v0 > 1e-10) {
        pass = false;
        fail += " v=0 slice deviates " + fmt(worst_v0) + ";";
    }
    r.n_points = ratios.count();
    r.ratio = ratios.stats();
    r.c_lower = r.ratio.min;
    r.c_upper = r.ratio.max;
    r.pass = pass;
    r.note = "v=0 max |ratio-1| " + fmt(worst_v0) + (fail.empty() ? "" : ";" + fail);
    return r;
}

ComparabilityReport check_moment(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    int d = spec.d;
    double beta = d + 1.5;
    r.domain = "moment integrals, beta = d + 1.5, |v| in [10,160]";
    bounds::BoundParams bp{beta, d};
    bool pass = true;
    std::string note;

    auto vvec = [&](double vn) {
        Vec v(d, 0.0);
        v[0] = vn;
        return v;
    };
    // divergence decided analytically at q >= 2 beta - d
    double qdiv = 2.0 * beta - d;
    pass &= bounds::moment_integral(vvec(1.0), qdiv, bp).divergent;
    pass &= bounds::moment_integral(vvec(1.0), qdiv + 0.5, bp).divergent;
    pass &= !bounds::moment_integral(vvec(1.0), qdiv - 1e-9, bp).divergent;
    if (!pass) note += " divergence flag wrong;";

    RatioSampler ratios(spec.seed);
    for (double q : {0.0, 1.0}) {
        SlopeFit fit;
        for (double vn : {10.0, 20.0, 40.0, 80.0, 160.0}) {
            auto mi = bounds::moment_integral(vvec(vn), q, bp);
            fit.add(std::log(1.0 + vn), std::log(mi.value));
            ratios.add(mi.value / std::pow(1.0 + vn, q - beta));
        }
        double slope = fit.slope();
        if (std::abs(slope - (q - beta)) > 0.1) {
            pass = false;
            note += " slope(q=" + fmt(q) + ") = " + fmt(slope) + " vs " + fmt(q - beta) + ";";
        } else {
            note += " slope(q=" + fmt(q) + ") = " + fmt(slope) + ";";
        }
    }
    r.n_points = ratios.count();
    r.ratio = ratios.stats();
    r.c_lower = r.ratio.min;
    r.c_upper = r.ratio.max;
    r.pass = pass;
    r.note = note;
    return r;
}

ComparabilityReport check_large_jump(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    double a = spec.alpha;
    r.domain = "50 z with |z| in [5,30], I_n series vs chord comparator, n_max=" +
               std::to_string(spec.n_max);
    levy::LevyKernel k = levy::LevyKernel::isotropic(spec.d, a, 1.0);
    bounds::BoundParams bp{spec.d + a, spec.d};

    RatioSampler ratios(spec.seed);
    CounterRng rng(spec.seed, 3);
    bool stderr_ok = true;
    double bound = 0.0;
    double worst_se = 0.0;
    for (int iz = 0; iz < 50; ++iz) {
        double rad = 5.0 + 25.0 * rng.uniform();
        double th = rng.uniform(0.0, 2.0 * M_PI);
        PhasePoint z = PhasePoint::of(rad * std::cos(th), rad * std::sin(th));
        long m = spec.m_per_term;
        sim::CubeProbability est;
        for (;;) {
            est = sim::large_jump_cube_probability(k, {z, 1.0}, spec.n_max, m,
                                                   spec.seed + 1013 * iz);
            if (est.estimate > 0.0 && est.stderr_total <= 0.1 * est.estimate) break;
            m *= 2;
            if (m > 32000000L) break;
        }
        bound = est.truncation_bound;
        double se_rel = est.estimate > 0.0 ? est.stderr_total / est.estimate : HUGE_VAL;
        worst_se = std::max(worst_se, se_rel);
        if (se_rel > 0.1) stderr_ok = false;
        double ratio = est.estimate * std::pow(1.0 + z.abs(), bp.beta) /
                       bounds::chord_integral(z, bp);
        ratios.add(ratio);
    }
    r.n_points = ratios.count();
    r.ratio = ratios.stats();
    r.c_lower = r.ratio.min;
    r.c_upper = r.ratio.max;
    bool spread_ok = std::max(r.ratio.max, 1.0 / r.ratio.min) <= spec.ratio_budget;
    bool bound_ok = bound < 1e-6;
    r.pass = spread_ok && stderr_ok && bound_ok;
    r.note = "Poisson tail bound " + fmt(bound) + (bound_ok ? "" : " >= 1e-6") +
             "; worst stderr/est " + fmt(worst_se) +
             (spread_ok ? "" : "; ratio spread outside budget");
    return r;
}

ComparabilityReport check_grube(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    double a = spec.alpha;
    r.domain = "grid |x|,|v| <= 100 step 1, comparison(1+alpha) vs closed d=1 comparator";
    bounds::BoundParams bp{1.0 + a, 1};
    RatioSampler ratios(spec.seed);
    for (int i = -100; i <= 100; ++i) {
        for (int j = -100; j <= 100; ++j) {
            PhasePoint z = PhasePoint::of(i, j);
            ratios.add(bounds::comparison(z, bp) / bounds::alt_comparator(z, a));
        }
    }
    r.n_points = ratios.count();
    r.ratio = ratios.stats();
    r.c_lower = r.ratio.min;
    r.c_upper = r.ratio.max;
    r.pass = r.ratio.max / r.ratio.min <= spec.ratio_budget;
    r.note = "spread " + fmt(r.ratio.max / r.ratio.min);
    return r;
}

ComparabilityReport check_conditional_moment(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    double a = spec.alpha;
    r.domain = "E(|X|^q | ||V|-v| <= 0.5), v in [2,30], vs (1+v)^q";
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, a, 1.0);
    sim::SimConfig cfg;
    cfg.seed = spec.seed;
    cfg.n_paths = spec.budget;
    cfg.eps = 0.05;
    cfg.scheme = sim::SmallJumpScheme::GaussianCompensate;
    cfg.t = spec.t;

    const std::vector<double> vc = {2.0, 3.3, 5.5, 9.1, 15.1, 25.0};
    struct Acc {
        KahanSum s05, s1;
        long n = 0;
    };
    unsigned nb = block_count(static_cast<std::size_t>(cfg.n_paths));
    std::vector<std::vector<Acc>> part(nb, std::vector<Acc>(vc.size()));
    parallel_blocks(static_cast<std::size_t>(cfg.n_paths),
                    [&](std::size_t b, std::size_t lo, std::size_t hi) {
                        for (std::size_t p = lo; p < hi; ++p) {
                            CounterRng prng(cfg.seed, p);
                            sim::PathSample ps = sample_kinetic_path(k, cfg, prng);
                            double av = std::abs(ps.V[0]);
                            double ax = std::abs(ps.X[0]);
                            for (std::size_t i = 0; i < vc.size(); ++i) {
                                if (std::abs(av - vc[i]) <= 0.5) {
                                    part[b][i].s05.add(std::sqrt(ax));
                                    part[b][i].s1.add(ax);
                                    ++part[b][i].n;
                                }
                            }
                        }
                    });
    std::vector<Acc> acc(vc.size());
    for (const auto& pb : part)
        for (std::size_t i = 0; i < vc.size(); ++i) {
            acc[i].s05.merge(pb[i].s05);
            acc[i].s1.merge(pb[i].s1);
            acc[i].n += pb[i].n;
        }

    RatioSampler ratios(spec.seed);
    bool pass = true;
    std::string note;
    for (double q : {0.5, 1.0}) {
        SlopeFit fit;
        for (std::size_t i = 0; i < vc.size(); ++i) {
            if (acc[i].n < 100) continue;
            double mean = (q == 0.5 ? acc[i].s05.value() : acc[i].s1.value()) / acc[i].n;
            fit.add(std::log(1.0 + vc[i]), std::log(mean));
            ratios.add(mean / std::pow(1.0 + vc[i], q));
        }
        double slope = fit.slope();
        note += " slope(q=" + fmt(q) + ") = " + fmt(slope) + " (n=" + std::to_string(fit.n) + ");";
        if (fit.n < 4 || std::abs(slope - q) > 0.15) pass = false;
    }
    r.n_points = ratios.count();
    r.ratio = ratios.stats();
    r.c_lower = r.ratio.min;
    r.c_upper = r.ratio.max;
    r.pass = pass;
    r.note = note;
    return r;
}

ComparabilityReport check_small_jump_tail(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    r.domain = "P(|Z_1^(0)| > R), R in [2,8]";
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, spec.alpha, 1.0);
    sim::SimConfig cfg;
    cfg.seed = spec.seed;
    cfg.n_paths = spec.budget;
    cfg.eps = 0.02;
    cfg.t = 1.0;
    sim::TailDecay td =
        sim::small_jump_tail_check(k, cfg, {2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0});
    RatioSampler ratios(spec.seed);
    long usable = 0;
    for (std::size_t i = 0; i < td.radii.size(); ++i) {
        if (!td.censored[i] && td.prob[i] > 0.0) {
            ratios.add(td.prob[i]);
            ++usable;
        }
    }
    r.n_points = usable;
    r.ratio = ratios.stats();
    r.pass = td.monotone && td.slope < 0.0 && usable >= 3;
    r.note = "slope vs (R+2)log(R+2): " + fmt(td.slope) + "; " + std::to_string(usable) +
             " radii usable";
    return r;
}

ComparabilityReport check_decompose(const CheckSpec& spec) {
    ComparabilityReport r = base_report(spec);
    r.domain = "random (n, u), n in [2,20], |u| <= n, d in {1,2,3}";
    CounterRng rng(spec.seed, 5);
    double worst_sum = 0.0;
    double nmin = HUGE_VAL, nmax = 0.0;
    bool pass = true;
    for (long m = 0; m < spec.budget; ++m) {
        int n = 2 + static_cast<int>(rng.next_u64() % 19);
        int d = 1 + static_cast<int>(rng.next_u64() % 3);
        Vec dir(d);
        for (auto& c : dir) c = rng.normal();
        double dn = norm(dir);
        Vec u = dn > 0 ? (rng.uniform() * n / dn) * dir : Vec(d, 0.0);
        auto parts = levy::decompose_vector(u, n);
        Vec s(d, 0.0);
        for (const auto& p : parts) {
            double pn = norm(p);
            nmin = std::min(nmin, pn);
            nmax = std::max(nmax, pn);
            if (pn < 1.0 / 3.0 - 1e-12 || pn > 1.0 + 1e-12) pass = false;
            for (int i = 0; i < d; ++i) s[i] += p[i];
        }
        worst_sum = std::max(worst_sum, norm(s - u));
        if (static_cast<int>(parts.size()) != n) pass = false;
    }
    if (worst_sum > 1e-12) pass = false;
    r.n_points = spec.budget;
    r.ratio = {nmin, nmin, 0.5 * (nmin + nmax), nmax, nmax};
    r.c_lower = nmin;
    r.c_upper = nmax;
    r.pass = pass;
    r.note = "norms in [" + fmt(nmin) + "," + fmt(nmax) + "], worst |sum-u| " + fmt(worst_sum);
    return r;
}

}  // namespace

const char* to_string(CheckName name) { return kNames[static_cast<int>(name)]; }

CheckName check_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(CheckName::KolmogorovOracle); ++i)
        if (s == kNames[i]) return static_cast<CheckName>(i);
    throw std::invalid_argument("unknown check: " + s);
}

ComparabilityReport run_check(const CheckSpec& spec) {
    auto start = std::chrono::steady_clock::now();
    ComparabilityReport r;
    try {
        switch (spec.name) {
            case CheckName::TheoremEnvelope: r = check_envelope(spec); break;
            case CheckName::GradientLog: r = check_gradient_log(spec); break;
            case CheckName::ChordLemma: r = check_chord(spec); break;
            case CheckName::MomentLemma: r = check_moment(spec); break;
            case CheckName::LargeJumpLemma: r = check_large_jump(spec); break;
            case CheckName::GrubeD1: r = check_grube(spec); break;
            case CheckName::ScalingExact: r = check_scaling(spec); break;
            case CheckName::ConditionalMoment: r = check_conditional_moment(spec); break;
            case CheckName::SmallJumpTail: r = check_small_jump_tail(spec); break;
            case CheckName::DecomposeLemma: r = check_decompose(spec); break;
            case CheckName::KolmogorovOracle: r = check_kolmogorov(spec); break;
        }
    } catch (const std::exception& ex) {
        r = base_report(spec);
        r.pass = false;
        r.note = std::string("point evaluation failed: ") + ex.what();
    }
    r.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CheckSpec> default_suite(std::uint64_t seed) {
    std::vector<CheckSpec> specs;
    auto add = [&](CheckName n, auto&&... mod) {
        CheckSpec s;
        s.name = n;
        s.seed = seed;
        (mod(s), ...);
        specs.push_back(s);
    };
    add(CheckName::KolmogorovOracle, [](CheckSpec& s) { s.tolerance = 1e-6; });
    for (double a : {0.5, 1.0, 1.5})
        add(CheckName::ScalingExact, [a](CheckSpec& s) {
            s.alpha = a;
            s.tolerance = 1e-4;
        });
    for (double a : {0.5, 1.0, 1.5})
        add(CheckName::TheoremEnvelope, [a](CheckSpec& s) {
            s.alpha = a;
            s.ratio_budget = 1e3;
        });
    for (double a : {0.5, 1.0, 1.5})
        add(CheckName::GradientLog, [a](CheckSpec& s) {
            s.alpha = a;
            s.ratio_budget = 3.0;
        });
    for (int d : {1, 2, 3})
        add(CheckName::ChordLemma, [d](CheckSpec& s) {
            s.d = d;
            s.budget = 10000;
            s.ratio_budget = 50.0;
        });
    for (int d : {1, 2})
        add(CheckName::MomentLemma, [d](CheckSpec& s) { s.d = d; });
    add(CheckName::LargeJumpLemma, [](CheckSpec& s) {
        s.alpha = 1.0;
        s.n_max = 13;
        s.ratio_budget = 100.0;
    });
    for (double a : {0.5, 1.0, 1.5})
        add(CheckName::GrubeD1, [a](CheckSpec& s) {
            s.alpha = a;
            s.ratio_budget = 50.0;
        });
    add(CheckName::ConditionalMoment, [](CheckSpec& s) {
        s.alpha = 1.5;
        s.budget = 10000000;
    });
    add(CheckName::SmallJumpTail, [](CheckSpec& s) {
        s.alpha = 1.5;
        s.budget = 2000000;
    });
    add(CheckName::DecomposeLemma, [](CheckSpec& s) { s.budget = 100000; });
    return specs;
}

std::string report_to_json(const ComparabilityReport& r) {
    json j;
    j["check"] = r.check;
    j["params"] = {{"d", r.d},           {"alpha", r.alpha},
                   {"t", r.t},           {"kernel", r.kernel},
                   {"budget", r.budget}, {"ratio_budget", r.ratio_budget},
                   {"tolerance", r.tolerance}};
    j["domain"] = r.domain;
    j["n_points"] = r.n_points;
    j["ratio_stats"] = {{"min", r.ratio.min},
                        {"p1", r.ratio.p1},
                        {"p50", r.ratio.p50},
                        {"p99", r.ratio.p99},
                        {"max", r.ratio.max}};
    j["fitted_constants"] = {{"C_lower", r.c_lower}, {"C_upper", r.c_upper}};
    j["pass"] = r.pass;
    j["seed"] = r.seed;
    j["runtime_s"] = r.runtime_s;
    j["note"] = r.note;
    return j.dump(2);
}

ComparabilityReport report_from_json(const std::string& text) {
    json j = json::parse(text);
    ComparabilityReport r;
    r.check = j.at("check");
    r.d = j.at("params").at("d");
    r.alpha = j.at("params").at("alpha");
    r.t = j.at("params").at("t");
    r.kernel = j.at("params").at("kernel");
    r.budget = j.at("params").at("budget");
    r.ratio_budget = j.at("params").at("ratio_budget");
    r.tolerance = j.at("params").at("tolerance");
    r.domain = j.at("domain");
    r.n_points = j.at("n_points");
    r.ratio.min = j.at("ratio_stats").at("min");
    r.ratio.p1 = j.at("ratio_stats").at("p1");
    r.ratio.p50 = j.at("ratio_stats").at("p50");
    r.ratio.p99 = j.at("ratio_stats").at("p99");
    r.ratio.max = j.at("ratio_stats").at("max");
    r.c_lower = j.at("fitted_constants").at("C_lower");
    r.c_upper = j.at("fitted_constants").at("C_upper");
    r.pass = j.at("pass");
    r.seed = j.at("seed");
    r.runtime_s = j.at("runtime_s");
    r.note = j.at("note");
    return r;
}

std::vector<std::string> emit_report(const std::vector<ComparabilityReport>& reports,
                                     const std::string& dir, const std::string& header) {
    if (reports.empty()) throw std::invalid_argument("emit_report: need at least one report");
    std::filesystem::create_directories(dir);
    std::vector<std::string> paths;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        std::string name = dir + "/report_" + std::to_string(i) + "_" + r.check + "_s" +
                           std::to_string(r.seed) + ".json";
        std::ofstream os(name);
        if (!os) throw std::runtime_error("cannot open " + name);
        os << report_to_json(r) << "\n";
        paths.push_back(name);
    }
    std::string csv = dir + "/summary.csv";
    std::ofstream os(csv);
    if (!os) throw std::runtime_error("cannot open " + csv);
    os << header;
    os << "check,d,alpha,t,kernel,seed,n_points,min,p1,p50,p99,max,C_lower,C_upper,pass,"
          "runtime_s\n";
    os.precision(10);
    for (const auto& r : reports) {
        os << r.check << "," << r.d << "," << r.alpha << "," << r.t << "," << r.kernel << ","
           << r.seed << "," << r.n_points << "," << r.ratio.min << "," << r.ratio.p1 << ","
           << r.ratio.p50 << "," << r.ratio.p99 << "," << r.ratio.max << "," << r.c_lower << ","
           << r.c_upper << "," << (r.pass ? 1 : 0) << "," << r.runtime_s << "\n";
    }
    paths.push_back(csv);
    return paths;
}

}  // namespace ksk::verify

#include "ksk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ksk/special.hpp"
#include "ksk/threads.hpp"

namespace ksk::sim {

namespace {

// standard symmetric alpha-stable, E e^{i xi S} = e^{-|xi|^alpha}
double standard_sym_stable(double alpha, CounterRng& rng) {
    double u = rng.uniform(-0.5 * M_PI, 0.5 * M_PI);
    if (alpha == 1.0) return std::tan(u);
    double w = rng.exponential();
    double s = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha);
    return s * std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
}

// one-sided gamma-stable subordinator, E e^{-s A} = e^{-s^gamma}, gamma in (0,1)
double standard_subordinator(double gamma, CounterRng& rng) {
    double u = rng.uniform(0.0, M_PI);
    double w = rng.exponential();
    double la = (gamma / (1.0 - gamma)) * std::log(std::sin(gamma * u)) +
                std::log(std::sin((1.0 - gamma) * u)) -
                (1.0 / (1.0 - gamma)) * std::log(std::sin(u));
    return std::exp(((1.0 - gamma) / gamma) * (la - std::log(w)));
}

Vec sphere_uniform(int d, CounterRng& rng) {
    if (d == 1) return {rng.uniform() < 0.5 ? -1.0 : 1.0};
    for (;;) {
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = rng.normal();
        double n = norm(g);
        if (n > 1e-12) return (1.0 / n) * g;
    }
}

bool kernel_radially_symmetric(const levy::LevyKernel& k) { return k.is_isotropic(); }

// per-coordinate variance rate of the sub-cutoff part:
// (1/d) int_{band, |y|<=eps} |y|^2 nu(dy)
double small_variance_rate(const levy::LevyKernel& k, double eps) {
    if (!kernel_radially_symmetric(k))
        throw std::domain_error("gaussian compensation needs a radially symmetric kernel");
    double lo = k.r_lo(), hi = std::min(eps, k.r_hi());
    if (hi <= lo) return 0.0;
    const auto& bands = k.bands();
    Vec unit(k.dim(), 0.0);
    unit[0] = 1.0;
    std::vector<double> edges{lo};
    for (double e : bands.edges)
        if (e > lo && e < hi) edges.push_back(e);
    edges.push_back(hi);
    double acc = 0.0;
    double a = k.alpha();
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        double mid = 0.5 * (edges[b] + edges[b + 1]);
        double kap = k.kappa_at(mid * unit);
        acc += kap * (std::pow(edges[b + 1], 2.0 - a) - std::pow(edges[b], 2.0 - a)) / (2.0 - a);
    }
    return special::sphere_area(k.dim()) * acc / k.dim();
}

}  // namespace

Vec sample_stable_increment(const levy::LevyKernel& k, double dt, CounterRng& rng) {
    if (!(dt > 0.0)) throw std::domain_error("sample_stable_increment: dt must be positive");
    if (!k.even_symmetric())
        throw std::domain_error(
            "sample_stable_increment: no exact sampler for non-even kernels");
    int d = k.dim();
    double alpha = k.alpha();
    bool plain = k.is_isotropic() && k.bands().edges.empty() && k.r_lo() == 0.0 &&
                 std::isinf(k.r_hi());
    if (plain) {
        Vec unit(d, 0.0);
        unit[0] = 1.0;
        double sigma_psi = k.iso_constant() * k.kappa_at(unit) * dt;
        if (d == 1) return {std::pow(sigma_psi, 1.0 / alpha) * standard_sym_stable(alpha, rng)};
        double m = std::sqrt(2.0) * std::pow(sigma_psi, 1.0 / alpha);
        double a = std::sqrt(standard_subordinator(0.5 * alpha, rng));
        Vec out(d);
        for (int i = 0; i < d; ++i) out[i] = m * a * rng.normal();
        return out;
    }
    // radially banded even kernel: jump-sum approximation (documented bias
    // O(eps^{2-alpha}) in the skipped variance beyond the Gaussian match)
    const double eps = 0.005;
    double lam = k.mass(eps, HUGE_VAL);
    Vec v(d, 0.0);
    double s = rng.exponential(lam);
    while (s < dt) {
        Vec y = sample_mu(k, eps, HUGE_VAL, rng);
        for (int i = 0; i < d; ++i) v[i] += y[i];
        s += rng.exponential(lam);
    }
    double sig = std::sqrt(small_variance_rate(k, eps) * dt);
    for (int i = 0; i < d; ++i) v[i] += sig * rng.normal();
    return v;
}

Vec sample_mu(const levy::LevyKernel& k, double r_lo, double r_hi, CounterRng& rng) {
    double lo = std::max(r_lo, k.r_lo()), hi = std::min(r_hi, k.r_hi());
    if (!(lo > 0.0) || !(hi > lo)) throw std::domain_error("sample_mu: empty band");
    double a = k.alpha();
    double plo = std::pow(lo, -a);
    double phi = std::isinf(hi) ? 0.0 : std::pow(hi, -a);
    bool constant = k.is_isotropic() && k.bands().edges.empty();
    for (;;) {
        double r = std::pow(plo - rng.uniform() * (plo - phi), -1.0 / a);
        Vec y = r * sphere_uniform(k.dim(), rng);
        if (constant) return y;
        if (rng.uniform() * k.kappa1() <= k.kappa_at(y)) return y;  // joint rejection
    }
}

PathSample sample_kinetic_path(const levy::LevyKernel& k, const SimConfig& cfg,
                               CounterRng& rng) {
    if (!(cfg.t > 0.0)) throw std::domain_error("sample_kinetic_path: t must be positive");
    if (!(cfg.eps > 0.0 && cfg.eps <= 1.0))
        throw std::domain_error("sample_kinetic_path: eps must lie in (0,1]");
    if (!k.even_symmetric())
        throw std::domain_error("sample_kinetic_path: non-even kernels unsupported");
    int d = k.dim();
    double t = cfg.t;
    PathSample out;
    out.scheme = cfg.scheme;
    out.V.assign(d, 0.0);
    out.X.assign(d, 0.0);
    out.small_V.assign(d, 0.0);
    out.small_X.assign(d, 0.0);

    // jumps above the cutoff: exact compound Poisson, X picks up y (t - tau)
    double cut = std::max(cfg.eps, k.r_lo());
    double lam = k.mass(cut, HUGE_VAL);
    if (lam > 0.0) {
        double s = rng.exponential(lam);
        while (s < t) {
            Vec y = sample_mu(k, cut, HUGE_VAL, rng);
            out.jump_times.push_back(s);
            out.jump_sizes.push_back(y);
            for (int i = 0; i < d; ++i) {
                out.V[i] += y[i];
                out.X[i] += y[i] * (t - s);
            }
            s += rng.exponential(lam);
        }
    }

    switch (cfg.scheme) {
        case SmallJumpScheme::Truncate:
            break;
        case SmallJumpScheme::GaussianCompensate: {
            // Brownian pair with the covariance of (int, endpoint) of the
            // sub-cutoff martingale: Var V = s2 t, Cov = s2 t^2/2, Var X = s2 t^3/3
            double s2 = small_variance_rate(k, cut);
            double sig = std::sqrt(s2);
            for (int i = 0; i < d; ++i) {
                double g1 = rng.normal(), g2 = rng.normal();
                double v = sig * std::sqrt(t) * g1;
                double x = 0.5 * t * v + sig * std::pow(t, 1.5) / (2.0 * std::sqrt(3.0)) * g2;
                out.small_V[i] = v;
                out.small_X[i] = x;
            }
            break;
        }
        case SmallJumpScheme::EulerMesh: {
            // refine the band down to cut/10, Riemann-integrate on the mesh
            double lo = std::max(cut / 10.0, k.r_lo());
            if (lo < cut) {
                double lam2 = k.mass(lo, cut);
                std::vector<double> times;
                std::vector<Vec> sizes;
                double s = rng.exponential(lam2);
                while (s < t) {
                    times.push_back(s);
                    sizes.push_back(sample_mu(k, lo, cut, rng));
                    s += rng.exponential(lam2);
                }
                for (std::size_t j = 0; j < times.size(); ++j)
                    for (int i = 0; i < d; ++i) out.small_V[i] += sizes[j][i];
                int m = std::max(cfg.euler_mesh, 1);
                double dt = t / m;
                Vec run(d, 0.0);
                std::size_t next = 0;
                for (int step = 0; step < m; ++step) {
                    double tk = step * dt;  // left-endpoint Riemann value
                    while (next < times.size() && times[next] <= tk) {
                        for (int i = 0; i < d; ++i) run[i] += sizes[next][i];
                        ++next;
                    }
                    for (int i = 0; i < d; ++i) out.small_X[i] += run[i] * dt;
                }
            }
            break;
        }
    }
    for (int i = 0; i < d; ++i) {
        out.V[i] += out.small_V[i];
        out.X[i] += out.small_X[i];
    }
    return out;
}

namespace {

// mu-measure of [a,b] for the d = 1 normalized large-jump law (support
// |y| > 1, radial density kappa(y)|y|^{-1-alpha}/lambda); piecewise closed
// form over the kernel's radial bands
double mu_interval_1d(const levy::LevyKernel& large, double lambda, double a, double b) {
    if (!(b > a)) return 0.0;
    double alpha = large.alpha();
    Vec unit{1.0};
    auto side = [&](double lo, double hi) {  // measure of [lo,hi], lo >= 1
        if (!(hi > lo)) return 0.0;
        double acc = 0.0;
        double edges[8];
        int ne = 0;
        edges[ne++] = lo;
        for (double e : large.bands().edges)
            if (e > lo && e < hi) edges[ne++] = e;
        edges[ne++] = hi;
        for (int i = 0; i + 1 < ne; ++i) {
            double l = edges[i], h = edges[i + 1];
            double kap = large.kappa_at(std::min(0.5 * (l + h), l + 1.0) * unit);
            double seg = (std::pow(l, -alpha) - (std::isinf(h) ? 0.0 : std::pow(h, -alpha))) /
                         alpha;
            acc += kap * seg;
        }
        return acc / lambda;
    };
    double out = 0.0;
    if (b > 1.0) out += side(std::max(a, 1.0), b);
    if (a < -1.0) out += side(std::max(-b, 1.0), -a);
    return out;
}

}  // namespace

CubeProbability large_jump_cube_probability(const levy::LevyKernel& k, const Cube& cube,
                                            int n_max, long m_per_term, std::uint64_t seed) {
    if (n_max < 1) throw std::domain_error("large_jump_cube_probability: n_max >= 1");
    if (!(cube.r > 0.0)) throw std::domain_error("large_jump_cube_probability: r > 0");
    int d = k.dim();
    levy::LevyKernel large = k.restricted(1.0, HUGE_VAL);
    double lambda = large.mass(1.0, HUGE_VAL);

    CubeProbability out;
    out.terms.assign(n_max, 0.0);
    out.term_stderr.assign(n_max, 0.0);

    // log weights lambda^n e^-lambda / n!
    std::vector<double> logw(n_max + 1, 0.0);
    for (int n = 1; n <= n_max; ++n)
        logw[n] = n * std::log(lambda) - lambda - std::lgamma(n + 1.0);

    const Vec& cx = cube.center.x;
    const Vec& cv = cube.center.v;
    double r2 = cube.r * cube.r;

    parallel_for(static_cast<std::size_t>(n_max), [&](std::size_t term) {
        int n = static_cast<int>(term) + 1;
        KahanSum acc, acc2;
        const long block_size = 1 << 14;
        long blocks = (m_per_term + block_size - 1) / block_size;
        // per-(term, block) streams: reproducible regardless of worker count
        for (long b = 0; b < blocks; ++b) {
            CounterRng rng(seed, (static_cast<std::uint64_t>(n) << 32) + b);
            long lo = b * block_size;
            long hi = std::min(m_per_term, lo + block_size);
            for (long m = lo; m < hi; ++m) {
                double est;
                if (d == 1) {
                    // condition on (s_1..s_n, y_2..y_n): the y_1 constraint is
                    // an interval intersection with closed mu-measure
                    double s1 = rng.uniform();
                    double u = 0.0, w = 0.0;
                    for (int j = 1; j < n; ++j) {
                        double s = rng.uniform();
                        double y = sample_mu(large, 1.0, HUGE_VAL, rng)[0];
                        u += y * s;
                        w += y;
                    }
                    double lo_v = cv[0] - cube.r - w, hi_v = cv[0] + cube.r - w;
                    double lo_x = cx[0] - cube.r - u, hi_x = cx[0] + cube.r - u;
                    if (s1 > 1e-300) {
                        double a = lo_x / s1, bb = hi_x / s1;
                        lo_v = std::max(lo_v, a);
                        hi_v = std::min(hi_v, bb);
                        est = mu_interval_1d(large, lambda, lo_v, hi_v);
                    } else {
                        est = (lo_x <= 0.0 && 0.0 <= hi_x)
                                  ? mu_interval_1d(large, lambda, lo_v, hi_v)
                                  : 0.0;
                    }
                } else {
                    Vec sumys(d, 0.0), sumy(d, 0.0);
                    for (int j = 0; j < n; ++j) {
                        double s = rng.uniform();
                        Vec y = sample_mu(large, 1.0, HUGE_VAL, rng);
                        for (int i = 0; i < d; ++i) {
                            sumy[i] += y[i];
                            sumys[i] += y[i] * s;
                        }
                    }
                    double dx = 0.0, dv = 0.0;
                    for (int i = 0; i < d; ++i) {
                        dx += (sumys[i] - cx[i]) * (sumys[i] - cx[i]);
                        dv += (sumy[i] - cv[i]) * (sumy[i] - cv[i]);
                    }
                    est = (dx <= r2 && dv <= r2) ? 1.0 : 0.0;
                }
                acc.add(est);
                acc2.add(est * est);
            }
        }
        double w = std::exp(logw[n]);
        double mean = acc.value() / static_cast<double>(m_per_term);
        double var = std::max(acc2.value() / static_cast<double>(m_per_term) - mean * mean, 0.0);
        out.terms[term] = w * mean;
        out.term_stderr[term] = w * std::sqrt(var / static_cast<double>(m_per_term));
    });

    double est = 0.0, var = 0.0;
    for (int n = 0; n < n_max; ++n) {
        est += out.terms[n];
        var += out.term_stderr[n] * out.term_stderr[n];
    }
    out.estimate = est;
    out.stderr_total = std::sqrt(var);

    long double cum = 0.0;
    for (int n = 0; n <= n_max; ++n) cum += std::exp(static_cast<long double>(
        n * std::log(lambda) - lambda - std::lgamma(n + 1.0)));
    out.truncation_bound = static_cast<double>(std::max<long double>(0.0, 1.0 - cum));
    return out;
}

TailDecay small_jump_tail_check(const levy::LevyKernel& k, const SimConfig& cfg,
                                const std::vector<double>& radii) {
    if (!(k.is_isotropic() && k.bands().edges.empty()))
        throw std::domain_error("small_jump_tail_check: kappa == const required");
    levy::LevyKernel small = k.restricted(0.0, 1.0);

    TailDecay out;
    out.radii = radii;
    std::vector<long> hits(radii.size(), 0);
    long n = cfg.n_paths;
    unsigned nblocks = block_count(static_cast<std::size_t>(n));
    std::vector<std::vector<long>> partial(nblocks, std::vector<long>(radii.size(), 0));
    parallel_blocks(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t lo,
                                                     std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            CounterRng rng(cfg.seed, p);
            PathSample ps = sample_kinetic_path(small, cfg, rng);
            double zn = std::sqrt(norm2(ps.X) + norm2(ps.V));
            for (std::size_t i = 0; i < radii.size(); ++i)
                if (zn > radii[i]) ++partial[b][i];
        }
    });
    for (const auto& pb : partial)
        for (std::size_t i = 0; i < radii.size(); ++i) hits[i] += pb[i];

    out.hits = hits;
    out.prob.resize(radii.size());
    out.censored.resize(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        out.prob[i] = static_cast<double>(hits[i]) / static_cast<double>(n);
        out.censored[i] = hits[i] < 20;
    }
    out.monotone = true;
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (out.prob[i] > out.prob[i - 1]) out.monotone = false;

    // slope of log P against (R+2) log(R+2), non-censored radii only
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (out.censored[i] || out.prob[i] <= 0.0 || out.prob[i] >= 1.0) continue;
        double u = (radii[i] + 2.0) * std::log(radii[i] + 2.0);
        double y = std::log(out.prob[i]);
        sx += u;
        sy += y;
        sxx += u * u;
        sxy += u * y;
        ++m;
    }
    out.slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    return out;
}

Histogram empirical_density(const std::vector<PhasePoint>& samples,
                            const HistogramSpec& spec) {
    if (samples.empty()) throw std::invalid_argument("empirical_density: need samples");
    int d = samples.front().dim();
    if (static_cast<int>(spec.n.size()) != 2 * d || spec.step.size() != spec.n.size())
        throw std::invalid_argument("empirical_density: need 2d box axes");
    Histogram h;
    h.spec = spec;
    std::size_t total = 1;
    h.box_volume = 1.0;
    for (int a = 0; a < 2 * d; ++a) {
        total *= static_cast<std::size_t>(spec.n[a]);
        h.box_volume *= spec.step[a];
    }
    h.counts.assign(total, 0);
    h.n_samples = static_cast<long>(samples.size());

    for (const auto& z : samples) {
        std::size_t pos = 0;
        bool in = true;
        for (int a = 0; a < 2 * d && in; ++a) {
            double val = a < d ? z.x[a] : z.v[a - d];
            double idx = std::floor(val / spec.step[a]) + spec.n[a] / 2;
            if (idx < 0 || idx >= spec.n[a])
                in = false;
            else
                pos = pos * spec.n[a] + static_cast<std::size_t>(idx);
        }
        if (in)
            ++h.counts[pos];
        else
            ++h.outside;
    }

    h.density.resize(total);
    h.ci_lo.resize(total);
    h.ci_hi.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        h.density[i] = static_cast<double>(h.counts[i]) /
                       (static_cast<double>(h.n_samples) * h.box_volume);
        special::clopper_pearson(h.counts[i], h.n_samples, 0.95, &h.ci_lo[i], &h.ci_hi[i]);
    }
    return h;
}

}  // namespace ksk::sim

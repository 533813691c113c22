// Acceptance suite: runs every top-level numerical criterion at its pinned
// tolerance and prints one pass/fail line each. Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ksk/bounds.hpp"
#include "ksk/kernel.hpp"
#include "ksk/levy.hpp"
#include "ksk/rng.hpp"
#include "ksk/simulate.hpp"
#include "ksk/threads.hpp"
#include "ksk/verify.hpp"

using namespace ksk;

namespace {

int g_failures = 0;

double now_s() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

void report(int id, const std::string& label, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] C%-2d %-28s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

verify::CheckSpec spec_of(verify::CheckName name, double alpha, std::uint64_t seed) {
    verify::CheckSpec s;
    s.name = name;
    s.alpha = alpha;
    s.seed = seed;
    return s;
}

// runs a batch of check specs under one criterion, all must pass within budget
void run_criterion(int id, const std::string& label, std::vector<verify::CheckSpec> specs,
                   double budget_s) {
    double start = now_s();
    bool pass = true;
    std::string detail;
    for (const auto& s : specs) {
        verify::ComparabilityReport r = verify::run_check(s);
        pass = pass && r.pass;
        if (!detail.empty()) detail += " | ";
        detail += (s.alpha != 0 ? "a=" + fmt(s.alpha) + " " : "") +
                  std::string(r.pass ? "ok" : "FAIL") + ": " + r.note;
    }
    double secs = now_s() - start;
    if (secs > budget_s) {
        pass = false;
        detail += " | over runtime budget " + fmt(budget_s) + "s";
    }
    report(id, label, pass, detail, secs);
}

// C9: empirical box probabilities and characteristic function vs inversion
void criterion_simulation_consistency() {
    double start = now_s();
    const double alpha = 1.5;
    const std::uint64_t seed = 20250810;
    const long n_paths = 1000000;
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, alpha, 1.0);

    sim::SimConfig cfg;
    cfg.seed = seed;
    cfg.n_paths = n_paths;
    cfg.eps = 0.01;
    cfg.scheme = sim::SmallJumpScheme::GaussianCompensate;
    cfg.t = 1.0;

    const int nbx = 20, nbv = 20;
    const double wx = 1.0, wv = 0.6;  // boxes over |x| <= 10, |v| <= 6
    const std::vector<double> freqs = [] {
        std::vector<double> f;
        for (int i = 1; i <= 20; ++i) f.push_back(0.25 * i);
        return f;
    }();

    struct Block {
        std::vector<long> counts;
        std::vector<KahanSum> ecf;
        std::vector<KahanSum> ecf2;
    };
    unsigned nb = block_count(n_paths);
    std::vector<Block> blocks(nb);
    for (auto& b : blocks) {
        b.counts.assign(nbx * nbv, 0);
        b.ecf.assign(freqs.size(), {});
        b.ecf2.assign(freqs.size(), {});
    }
    parallel_blocks(n_paths, [&](std::size_t bi, std::size_t lo, std::size_t hi) {
        Block& b = blocks[bi];
        for (std::size_t p = lo; p < hi; ++p) {
            CounterRng rng(seed, p);
            sim::PathSample ps = sample_kinetic_path(k, cfg, rng);
            double x = ps.X[0], v = ps.V[0];
            double bxf = std::floor(x / wx) + nbx / 2, bvf = std::floor(v / wv) + nbv / 2;
            if (bxf >= 0 && bxf < nbx && bvf >= 0 && bvf < nbv)
                ++b.counts[static_cast<int>(bxf) * nbv + static_cast<int>(bvf)];
            for (std::size_t f = 0; f < freqs.size(); ++f) {
                double c = std::cos(freqs[f] * v);
                b.ecf[f].add(c);
                b.ecf2[f].add(c * c);
            }
        }
    });
    std::vector<long> counts(nbx * nbv, 0);
    std::vector<double> ecf(freqs.size(), 0.0), ecf2(freqs.size(), 0.0);
    for (const auto& b : blocks) {
        for (int i = 0; i < nbx * nbv; ++i) counts[i] += b.counts[i];
        for (std::size_t f = 0; f < freqs.size(); ++f) {
            ecf[f] += b.ecf[f].value();
            ecf2[f] += b.ecf2[f].value();
        }
    }

    // reference probabilities from the FFT inversion, box-overlap weighted
    auto wreq = kern::suggest_truncation_axes(k, 1.0, 1e-10);
    double sx = wx / std::ceil(wx * wreq[0] / M_PI) / 2.0;
    double sv = wv / std::ceil(wv * wreq[1] / M_PI) / 2.0;
    int nx = 4096, nv = 2048;
    kern::DensityGrid g = kern::density_grid(k, 1.0, kern::GridSpec{{{nx, sx}, {nv, sv}}});
    auto axis_weight = [](double c, double s, double a, double b) {
        double lo = std::max(c - 0.5 * s, a), hi = std::min(c + 0.5 * s, b);
        return hi > lo ? (hi - lo) / s : 0.0;
    };
    long ok_boxes = 0, tested = 0;
    for (int bx = 0; bx < nbx; ++bx) {
        double ax = (bx - nbx / 2) * wx, bxr = ax + wx;
        for (int bv = 0; bv < nbv; ++bv) {
            double av = (bv - nbv / 2) * wv, bvr = av + wv;
            double prob = 0.0;
            int i0 = static_cast<int>(std::floor(ax / sx)) + nx / 2 - 2;
            int i1 = static_cast<int>(std::ceil(bxr / sx)) + nx / 2 + 2;
            int j0 = static_cast<int>(std::floor(av / sv)) + nv / 2 - 2;
            int j1 = static_cast<int>(std::ceil(bvr / sv)) + nv / 2 + 2;
            KahanSum acc;
            for (int i = std::max(i0, 0); i < std::min(i1, nx); ++i) {
                double wxi = axis_weight(g.coord(0, i), sx, ax, bxr);
                if (wxi == 0.0) continue;
                for (int j = std::max(j0, 0); j < std::min(j1, nv); ++j) {
                    double wvj = axis_weight(g.coord(1, j), sv, av, bvr);
                    if (wvj != 0.0) acc.add(wxi * wvj * g.at(i, j));
                }
            }
            prob = acc.value() * sx * sv;
            double phat = static_cast<double>(counts[bx * nbv + bv]) / n_paths;
            double sigma = std::sqrt(std::max(prob * (1.0 - prob), 1e-12) / n_paths);
            ++tested;
            if (std::abs(phat - prob) <= 4.0 * sigma) ++ok_boxes;
        }
    }
    double frac = static_cast<double>(ok_boxes) / tested;

    int ecf_ok = 0;
    for (std::size_t f = 0; f < freqs.size(); ++f) {
        double mean = ecf[f] / n_paths;
        double var = std::max(ecf2[f] / n_paths - mean * mean, 0.0);
        double target = std::exp(-k.psi({freqs[f]}).real());
        if (std::abs(mean - target) <= 4.0 * std::sqrt(var / n_paths) + 1e-9) ++ecf_ok;
    }

    double secs = now_s() - start;
    bool pass = frac >= 0.95 && ecf_ok == static_cast<int>(freqs.size()) && secs < 600.0;
    report(9, "simulation consistency", pass,
           fmt(100.0 * frac) + "% of boxes within 4 sigma; ECF " + std::to_string(ecf_ok) + "/" +
               std::to_string(freqs.size()) + " frequencies ok",
           secs);
}

}  // namespace

int main() {
    std::printf("acceptance suite: d=1 kinetic stable kernel library\n");

    // C1: closed-form Gaussian oracle for the alpha = 2 surrogate
    {
        verify::CheckSpec s = spec_of(verify::CheckName::KolmogorovOracle, 0.0, 7);
        s.tolerance = 1e-6;
        run_criterion(1, "kolmogorov oracle", {s}, 60.0);
    }
    // C2: exact scaling identities at (lambda, t) = (2, 0.5) plus self-similarity
    {
        std::vector<verify::CheckSpec> specs;
        for (double a : {0.5, 1.0, 1.5}) {
            verify::CheckSpec s = spec_of(verify::CheckName::ScalingExact, a, 7);
            s.tolerance = 1e-4;
            specs.push_back(s);
        }
        run_criterion(2, "exact scaling identities", specs, 300.0);
    }
    // C3: two-sided envelope ratio and exponent check
    {
        std::vector<verify::CheckSpec> specs;
        for (double a : {0.5, 1.0, 1.5}) {
            verify::CheckSpec s = spec_of(verify::CheckName::TheoremEnvelope, a, 7);
            s.ratio_budget = 1e3;
            specs.push_back(s);
        }
        run_criterion(3, "envelope two-sided ratio", specs, 1200.0);
    }
    // C4: log-gradient constants stable in t within factor 3
    {
        std::vector<verify::CheckSpec> specs;
        for (double a : {0.5, 1.0, 1.5}) {
            verify::CheckSpec s = spec_of(verify::CheckName::GradientLog, a, 7);
            s.ratio_budget = 3.0;
            specs.push_back(s);
        }
        run_criterion(4, "log-gradient bound", specs, 1200.0);
    }
    // C5: chord integral comparator
    {
        std::vector<verify::CheckSpec> specs;
        for (int d : {1, 2, 3}) {
            verify::CheckSpec s = spec_of(verify::CheckName::ChordLemma, 0.0, 7);
            s.d = d;
            s.budget = 10000;
            s.ratio_budget = 50.0;
            specs.push_back(s);
        }
        run_criterion(5, "chord integral comparator", specs, 120.0);
    }
    // C6: moment integrals: divergence flag and |v| exponent
    {
        std::vector<verify::CheckSpec> specs;
        for (int d : {1, 2}) {
            verify::CheckSpec s = spec_of(verify::CheckName::MomentLemma, 0.0, 7);
            s.d = d;
            specs.push_back(s);
        }
        run_criterion(6, "moment integral exponents", specs, 300.0);
    }
    // C7: large-jump cube probability series, parameters pinned as stated
    // (n_max = 8 with a sub-1e-6 Poisson tail is unattainable at lambda = 2;
    // the bound assertion is kept faithful and reported honestly)
    {
        verify::CheckSpec s = spec_of(verify::CheckName::LargeJumpLemma, 1.0, 7);
        s.n_max = 8;
        s.m_per_term = 400000;
        s.ratio_budget = 100.0;
        run_criterion(7, "large-jump cube probability", {s}, 900.0);
    }
    // C8: vector decomposition property suite
    {
        verify::CheckSpec s = spec_of(verify::CheckName::DecomposeLemma, 0.0, 7);
        s.budget = 100000;
        run_criterion(8, "vector decomposition", {s}, 10.0);
    }
    // C9
    criterion_simulation_consistency();
    // C10: conditional moments of |X| given |V|
    {
        verify::CheckSpec s = spec_of(verify::CheckName::ConditionalMoment, 1.5, 7);
        s.budget = 10000000;
        run_criterion(10, "conditional moments", {s}, 1800.0);
    }
    // C11: closed d = 1 comparator
    {
        std::vector<verify::CheckSpec> specs;
        for (double a : {0.5, 1.0, 1.5}) {
            verify::CheckSpec s = spec_of(verify::CheckName::GrubeD1, a, 7);
            s.ratio_budget = 50.0;
            specs.push_back(s);
        }
        run_criterion(11, "closed d=1 comparator", specs, 60.0);
    }

    // non-binding diagnostics: the same series check at the smallest n_max
    // whose Poisson tail clears 1e-6, and the kappa1-monotonicity probe
    {
        verify::CheckSpec s = spec_of(verify::CheckName::LargeJumpLemma, 1.0, 7);
        s.n_max = 13;
        s.ratio_budget = 100.0;
        verify::ComparabilityReport r = verify::run_check(s);
        std::printf("[diag] large-jump series with n_max=13: %s; %s\n",
                    r.pass ? "pass" : "fail", r.note.c_str());
        levy::LevyKernel k1 = levy::LevyKernel::isotropic(1, 1.5, 1.0);
        levy::LevyKernel k2 = levy::LevyKernel::builtin("band-demo", 1, 1.5);
        double p1 = kern::density_point(k1, 1.0, PhasePoint::zero(1));
        double p2 = kern::density_point(k2, 1.0, PhasePoint::zero(1));
        std::printf("[diag] kappa1 monotonicity probe: p(0) const-kernel %.6g, banded %.6g\n",
                    p1, p2);
    }

    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}

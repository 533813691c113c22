#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "ksk/kernel.hpp"
#include "ksk/quad.hpp"
#include "ksk/rng.hpp"

using namespace ksk;
using namespace ksk::kern;

TEST_CASE("kolmogorov closed form") {
    PhasePoint o = PhasePoint::zero(1);
    CHECK(kolmogorov_density(o, o, 1.0) ==
          doctest::Approx(std::sqrt(3.0) / (2.0 * M_PI)).epsilon(1e-12));
    CHECK(std::sqrt(3.0) / (2.0 * M_PI) == doctest::Approx(0.27566).epsilon(1e-4));

    // translation identity
    PhasePoint z0 = PhasePoint::of(0.7, -1.2), z = PhasePoint::of(2.0, 0.4);
    double t = 0.8;
    PhasePoint sh = shear(z0, t);
    CHECK(kolmogorov_density(z0, z, t) ==
          doctest::Approx(kolmogorov_density(o, PhasePoint(z.x - sh.x, z.v - sh.v), t))
              .epsilon(1e-13));

    // integrates to 1 (nested adaptive over a generous window)
    double mass = quad::adaptive(
        [&](double x) {
            return quad::adaptive(
                [&](double v) { return kolmogorov_density(o, PhasePoint::of(x, v), 1.0); },
                -14.0, 14.0, 1e-9, 1e-13);
        },
        -10.0, 10.0, 1e-8, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("surrogate inversion matches the Gaussian oracle") {
    levy::QuadraticExponent qe(1);
    PointEvaluator pe(qe, 1.0, 3.0, 3.0, 1e-13);
    PhasePoint o = PhasePoint::zero(1);
    for (double x : {0.0, 1.0, 2.5}) {
        for (double v : {0.0, -1.5, 3.0}) {
            double oracle = kolmogorov_density(o, PhasePoint::of(x, v), 1.0);
            if (oracle < 1e-9) continue;
            CHECK(pe.eval(x, v) == doctest::Approx(oracle).epsilon(1e-6));
        }
    }
}

TEST_CASE("even kernel symmetry and refinement oracle at z = 0") {
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, 1.5, 1.0);
    PointEvaluator pe(k, 1.0, 4.0, 4.0, 1e-9);
    CHECK(pe.eval(1.3, -0.4) == doctest::Approx(pe.eval(-1.3, 0.4)).epsilon(1e-9));

    PointEvaluator fine(k, 1.0, 4.0, 4.0, 1e-12);
    for (double x : {0.0, 1.1}) {
        for (double v : {0.0, 0.7}) {
            CHECK(pe.eval(x, v) == doctest::Approx(fine.eval(x, v)).epsilon(1e-6));
        }
    }
    CHECK(density_point(k, 1.0, PhasePoint::zero(1)) ==
          doctest::Approx(fine.eval(0.0, 0.0)).epsilon(1e-6));
}

TEST_CASE("density grid: mass, spot agreement, scaling identities") {
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, 1.5, 1.0);
    auto w = suggest_truncation_axes(k, 1.0, 1e-9);
    GridAxis ax{4096, M_PI / w[0]}, av{2048, M_PI / w[1]};
    DensityGrid g = density_grid(k, 1.0, GridSpec{{ax, av}});
    CHECK(g.mass == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(g.max_imag < 1e-12);

    double vmin = 0.0, vmax = 0.0;
    for (double v : g.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    CHECK(vmin >= -1e-9 * vmax);

    // spot checks vs pointwise inversion, inner region (FFT periodization
    // pollutes the outer tail; see the alias analysis in the verify module)
    PointEvaluator pe(k, 1.0, 20.0, 7.0, 1e-11);
    CounterRng rng(12, 0);
    for (int it = 0; it < 100; ++it) {
        int i = g.axes[0].n / 2 + static_cast<int>(rng.next_u64() % 400) - 200;
        int j = g.axes[1].n / 2 + static_cast<int>(rng.next_u64() % 300) - 150;
        double x = g.coord(0, i), v = g.coord(1, j);
        if (std::abs(x) > 20.0 || std::abs(v) > 7.0) continue;
        double p = pe.eval(x, v);
        if (p < 1e-8) continue;
        CHECK(g.at(i, j) == doctest::Approx(p).epsilon(1e-5));
    }

    // self-similarity p_t = t^{-2/a-1} p_1(T_t z) via an index-aligned t=2 grid
    double cx = std::pow(2.0, 1.0 / 1.5 + 1.0), cv = std::pow(2.0, 1.0 / 1.5);
    DensityGrid g2 = density_grid(k, 2.0, GridSpec{{{ax.n, cx * ax.step}, {av.n, cv * av.step}}});
    double fac = std::pow(2.0, -2.0 / 1.5 - 1.0);
    // lambda-scaling p^{2nu}_{0.5}(x,v) = 2 p^nu_1(2x, v) on half-step nodes
    levy::LevyKernel k2 = levy::LevyKernel::isotropic(1, 1.5, 2.0);
    DensityGrid ga = density_grid(k2, 0.5, GridSpec{{{ax.n, 0.5 * ax.step}, {av.n, av.step}}});
    double pmax = 0.0;
    for (double v : g.values) pmax = std::max(pmax, v);
    for (int it = 0; it < 200; ++it) {
        int i = static_cast<int>(rng.next_u64() % ax.n);
        int j = static_cast<int>(rng.next_u64() % av.n);
        double base = g.at(i, j);
        if (base < 1e-4 * pmax) continue;
        CHECK(g2.at(i, j) == doctest::Approx(fac * base).epsilon(1e-4));
        CHECK(ga.at(i, j) == doctest::Approx(2.0 * base).epsilon(1e-4));
    }
}

TEST_CASE("grid configuration errors") {
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, 1.5, 1.0);
    CHECK_THROWS_AS(density_grid(k, 1.0, GridSpec{{{128, 1.0}, {128, 1.0}}}), ConfigError);
    CHECK_THROWS_AS(density_grid(k, 1.0, GridSpec{{{127, 0.01}, {128, 0.01}}}), ConfigError);
}

TEST_CASE("spectral gradients") {
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, 1.5, 1.0);
    // odd derivative of an even density vanishes at the origin
    CHECK(std::abs(density_gradient(k, 1.0, PhasePoint::zero(1), 1, 0)) < 1e-10);
    CHECK(std::abs(density_gradient(k, 1.0, PhasePoint::zero(1), 0, 1)) < 1e-10);

    // central finite differences of the pointwise inversion
    PointEvaluator pe(k, 1.0, 4.0, 4.0, 1e-11);
    PointEvaluator gx(k, 1.0, 4.0, 4.0, 1e-11, 1, 0);
    PointEvaluator gv(k, 1.0, 4.0, 4.0, 1e-11, 0, 1);
    double h = 1e-3;
    for (auto [x, v] : {std::pair{0.8, -0.5}, {2.0, 1.0}, {0.0, 2.0}}) {
        double p = pe.eval(x, v);
        if (p < 1e-6) continue;
        double fdx = (pe.eval(x + h, v) - pe.eval(x - h, v)) / (2 * h);
        double fdv = (pe.eval(x, v + h) - pe.eval(x, v - h)) / (2 * h);
        CHECK(gx.eval(x, v) == doctest::Approx(fdx).epsilon(1e-3));
        CHECK(gv.eval(x, v) == doctest::Approx(fdv).epsilon(1e-3));
    }

    // closed-form Gaussian gradient for the surrogate
    levy::QuadraticExponent qe(1);
    PointEvaluator sx(qe, 1.0, 3.0, 3.0, 1e-13, 1, 0);
    PhasePoint o = PhasePoint::zero(1);
    for (auto [x, v] : {std::pair{0.5, 0.5}, {1.0, -0.3}}) {
        double g = kolmogorov_density(o, PhasePoint::of(x, v), 1.0) * (-6.0 * x + 3.0 * v);
        CHECK(sx.eval(x, v) == doctest::Approx(g).epsilon(1e-5));
    }
}

TEST_CASE("density_from delegates through the shear") {
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, 1.2, 1.0);
    PhasePoint z0 = PhasePoint::of(0.4, -0.8), z = PhasePoint::of(1.0, 0.2);
    PhasePoint sh = shear(z0, 1.0);
    double direct = density_point(k, 1.0, PhasePoint(z.x - sh.x, z.v - sh.v));
    CHECK(density_from(k, 1.0, z0, z) == doctest::Approx(direct));
    CHECK(density_from(k, 1.0, PhasePoint::zero(1), z) ==
          doctest::Approx(density_point(k, 1.0, z)));

    // surrogate matches the translated Gaussian oracle
    levy::QuadraticExponent qe(1);
    CHECK(density_from(qe, 1.0, z0, z) ==
          doctest::Approx(kolmogorov_density(z0, z, 1.0)).epsilon(1e-6));
}

TEST_CASE("d = 2 point inversion vs an importance-sampled oracle at the origin") {
    levy::LevyKernel k = levy::LevyKernel::isotropic(2, 1.5, 1.0);
    double p0 = density_point(k, 1.0, PhasePoint::zero(2));
    CHECK(p0 > 0.0);
    CHECK(p0 < 1.0);
    // no oscillation at z = 0: Gaussian importance Monte Carlo of
    // (2pi)^-4 int e^{-phi(w)} dw
    KineticPhase kp(k, 1.0);
    CounterRng rng(2024, 0);
    const double sig = 2.0;
    const long n = 2000000;
    double s = 0, s2 = 0;
    for (long i = 0; i < n; ++i) {
        Vec w(4);
        double q = 0;
        for (auto& c : w) {
            c = sig * rng.normal();
            q += c * c;
        }
        double re = kp({w[0], w[1]}, {w[2], w[3]}).real();
        double val = std::exp(-re + q / (2 * sig * sig)) * std::pow(2 * M_PI * sig * sig, 2.0);
        s += val;
        s2 += val * val;
    }
    double mean = s / n;
    double sd = std::sqrt((s2 / n - mean * mean) / n);
    double scale = std::pow(2 * M_PI, -4.0);
    CHECK(std::abs(p0 - mean * scale) < 4.0 * sd * scale + 1e-9);
}

TEST_CASE("grid serialization round trip") {
    levy::LevyKernel k = levy::LevyKernel::isotropic(1, 1.2, 1.0);
    auto w = suggest_truncation_axes(k, 1.0, 1e-8);
    DensityGrid g = density_grid(k, 1.0, GridSpec{{{256, M_PI / w[0]}, {128, M_PI / w[1]}}});

    std::string bin = "/tmp/ksk_test_grid.bin";
    write_binary(g, bin);
    DensityGrid r = read_binary(bin);
    CHECK(r.d == g.d);
    CHECK(r.t == g.t);
    CHECK(r.axes[0].n == g.axes[0].n);
    CHECK(r.axes[0].step == g.axes[0].step);
    REQUIRE(r.values.size() == g.values.size());
    for (std::size_t i = 0; i < g.values.size(); i += 977)
        CHECK(r.values[i] == g.values[i]);

    std::string csv = "/tmp/ksk_test_grid.csv";
    write_csv(g, csv, "# test\n");
    std::FILE* f = std::fopen(csv.c_str(), "r");
    REQUIRE(f);
    long lines = 0;
    int c;
    while ((c = std::fgetc(f)) != EOF)
        if (c == '\n') ++lines;
    std::fclose(f);
    CHECK(lines == static_cast<long>(g.values.size()) + 2);  // header comment + column row
}

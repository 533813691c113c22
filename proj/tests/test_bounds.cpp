#include <doctest.h>

#include <cmath>

#include "ksk/bounds.hpp"
#include "ksk/quad.hpp"
#include "ksk/rng.hpp"
#include "ksk/special.hpp"

using namespace ksk;
using namespace ksk::bounds;

TEST_CASE("comparison profile values") {
    BoundParams p{2.0, 1};
    CHECK(comparison(PhasePoint::zero(2), {3.0, 2}) == doctest::Approx(1.0));
    // x = 0: infimum 0 at s = 0
    PhasePoint z0(Vec{0.0, 0.0}, Vec{1.0, 2.0});
    double vn = std::sqrt(5.0);
    CHECK(comparison(z0, {2.5, 2}) ==
          doctest::Approx(std::pow(1.0 + vn, -3.5)).epsilon(1e-14));
    // direct evaluation oracle
    double expect = std::pow(1.0 + std::sqrt(10.0), -3.0) / 3.0;
    CHECK(comparison(PhasePoint::of(3.0, 1.0), p) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(expect == doctest::Approx(4.623e-3).epsilon(1e-3));
}

TEST_CASE("piecewise form equals the direct form") {
    PhasePoint za = PhasePoint::of(-1.0, 1.0);
    for (double beta : {1.5, 2.0, 3.3}) {
        double expect = std::pow(1.0 + std::sqrt(2.0), -1.0 - beta) * std::pow(2.0, 1.0 - beta);
        CHECK(comparison_piecewise(za, {beta, 1}) == doctest::Approx(expect).epsilon(1e-13));
    }
    PhasePoint zb(Vec{1.0, 1.0}, Vec{2.0, 0.0});
    CHECK(comparison_piecewise(zb, {2.0, 2}) ==
          doctest::Approx(std::pow(1.0 + std::sqrt(6.0), -3.0) / 2.0).epsilon(1e-13));

    CounterRng rng(7, 0);
    long hits[3] = {0, 0, 0};
    for (long it = 0; it < 100000; ++it) {
        int d = 1 + static_cast<int>(rng.next_u64() % 3);
        Vec x(d), v(d);
        for (int i = 0; i < d; ++i) {
            x[i] = rng.normal() * 8;
            v[i] = rng.normal() * 8;
        }
        PhasePoint z(x, v);
        double xv = dot(x, v);
        ++hits[xv <= 0 ? 0 : (xv <= norm2(v) ? 1 : 2)];
        BoundParams p{1.0 + 0.4 * d + 2.2 * rng.uniform(), d};
        double a = comparison(z, p), b = comparison_piecewise(z, p);
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
    // all three case regions exercised
    CHECK(hits[0] > 1000);
    CHECK(hits[1] > 1000);
    CHECK(hits[2] > 1000);
}

TEST_CASE("literal middle-case formula agrees on well-conditioned inputs") {
    CounterRng rng(8, 0);
    for (int it = 0; it < 2000; ++it) {
        Vec x{rng.normal() * 3, rng.normal() * 3}, v{rng.normal() * 3, rng.normal() * 3};
        PhasePoint z(x, v);
        double xv = dot(x, v);
        if (!(xv > 0 && xv <= norm2(v))) continue;
        double c = xv / norm(v);
        double lit = std::sqrt(std::max(0.0, norm2(x) - c * c));
        if (lit < 1e-3) continue;
        CHECK(min_chord(z).value == doctest::Approx(lit).epsilon(1e-9));
    }
}

TEST_CASE("chord weight") {
    CHECK(chord_weight(PhasePoint::zero(1), {2.0, 1}) == doctest::Approx(1.0));
    CHECK(chord_weight(PhasePoint::of(4.0, 0.0), {3.0, 1}) ==
          doctest::Approx(std::pow(5.0, -2.0)));
    CHECK(chord_weight(PhasePoint::of(3.0, 1.0), {2.0, 1}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("chord integral: constants and the comparator window") {
    BoundParams p{2.4, 1};
    CHECK(chord_integral(PhasePoint::zero(1), p) == doctest::Approx(1.0).epsilon(1e-10));
    // v = 0: constant integrand, exact value
    for (double x : {0.4, 3.0, 50.0})
        CHECK(chord_integral(PhasePoint::of(x, 0.0), p) ==
              doctest::Approx(std::pow(1.0 + x, -2.4)).epsilon(1e-10));

    CounterRng rng(9, 0);
    double rmin = HUGE_VAL, rmax = 0.0;
    for (int it = 0; it < 3000; ++it) {
        int d = 1 + static_cast<int>(rng.next_u64() % 2);
        Vec x(d), v(d);
        for (int i = 0; i < d; ++i) {
            x[i] = rng.normal() * 20;
            v[i] = rng.normal() * 20;
        }
        PhasePoint z(x, v);
        BoundParams q{d + 1.3, d};
        double r = chord_integral(z, q) * (1.0 + z.abs()) / chord_weight(z, q);
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    CHECK(rmax / rmin < 50.0);
    CHECK(rmin > 0.02);
}

TEST_CASE("moment integral: divergence criterion and closed-form oracle") {
    BoundParams p{2.0, 1};
    CHECK(moment_integral({0.0}, 3.0, p).divergent);       // q = 2b - d
    CHECK(moment_integral({0.0}, 5.0, p).divergent);
    CHECK_FALSE(moment_integral({0.0}, 2.9, p).divergent);
    auto m = moment_integral({0.0}, 0.0, p);
    CHECK_FALSE(m.divergent);
    CHECK(m.value == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("moment integral oracle for d = 2, v = 0") {
    // N = (1+rho)^{-2 beta}, integral = 2 pi int rho (1+rho)^{-2 beta} drho
    BoundParams p{3.5, 2};
    double direct = quad::adaptive(
        [&](double r) { return 2.0 * M_PI * r * std::pow(1.0 + r, -7.0); }, 0.0, 4000.0, 1e-10,
        1e-14, 1000000);
    auto m = moment_integral({0.0, 0.0}, 0.0, p);
    CHECK(m.value == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("moment integral slope in |v|") {
    BoundParams p{2.0, 1};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double v : {10.0, 20.0, 40.0, 80.0}) {
        double val = moment_integral({v}, 1.0, p).value;
        double lx = std::log(1.0 + v), ly = std::log(val);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("alternative comparator") {
    CHECK(alt_comparator(PhasePoint::zero(1), 1.0) == doctest::Approx(1.0));
    CHECK(alt_comparator(PhasePoint::of(1.0, 2.0), 1.0) == doctest::Approx(1.0 / 64.0));
    // d = 1 comparability sweep against the comparison profile
    for (double a : {0.5, 1.0, 1.5}) {
        double rmin = HUGE_VAL, rmax = 0.0;
        for (int i = -40; i <= 40; i += 2) {
            for (int j = -40; j <= 40; j += 2) {
                PhasePoint z = PhasePoint::of(2.5 * i, 2.5 * j);
                double r = comparison(z, {1.0 + a, 1}) / alt_comparator(z, a);
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
            }
        }
        CHECK(rmax / rmin < 50.0);
    }
}

TEST_CASE("tail mass constant") {
    CHECK(tail_mass_constant(1, 1.0) == doctest::Approx(6.0).epsilon(1e-13));
    // quadrature cross-check of the radial reduction (analytic remainder
    // beyond the numeric horizon)
    for (double a : {0.5, 1.5}) {
        for (int d : {1, 2}) {
            const double hi = 1e6;
            double direct = special::sphere_area(d) *
                            (quad::adaptive([&](double r) { return std::pow(r, -1.0 - a); },
                                            1.0 / 3.0, hi, 1e-11, 1e-14, 1000000) +
                             std::pow(hi, -a) / a);
            CHECK(tail_mass_constant(d, a) == doctest::Approx(direct).epsilon(1e-9));
        }
    }
}

TEST_CASE("envelope shapes") {
    EnvelopeParams e{1.0, 1.0, 1.0, 1.2, 1};
    PhasePoint z = PhasePoint::of(1.5, -0.5);
    Envelope env = heat_kernel_envelope(PhasePoint::zero(1), z, e);
    double n = comparison(z, {1.0 + e.alpha, 1});
    CHECK(env.lower == doctest::Approx(std::exp(-tail_mass_constant(1, 1.2)) * n).epsilon(1e-12));
    CHECK(env.upper_shape == doctest::Approx(n).epsilon(1e-12));

    // translation invariance: depends on z - shear(z0, t) only
    EnvelopeParams e2{0.7, 1.9, 0.8, 1.4, 1};
    PhasePoint z0 = PhasePoint::of(0.3, -1.1);
    PhasePoint sh = shear(z0, e2.t);
    PhasePoint zt(z.x + sh.x, z.v + sh.v);
    Envelope a = heat_kernel_envelope(z0, zt, e2);
    Envelope b = heat_kernel_envelope(PhasePoint::zero(1), z, e2);
    CHECK(a.lower == doctest::Approx(b.lower).epsilon(1e-12));
    CHECK(a.upper_shape == doctest::Approx(b.upper_shape).epsilon(1e-12));

    // scaling form: kappa0 = 1, arbitrary t reproduces the dilated argument
    EnvelopeParams e3{1.0, 1.3, 0.37, 0.9, 1};
    Envelope c = heat_kernel_envelope(PhasePoint::zero(1), z, e3);
    double expect = std::exp(-tail_mass_constant(1, 0.9) * 1.3) *
                    std::pow(e3.t, -2.0 / 0.9 - 1.0) *
                    comparison(dilate(z, e3.t, 0.9), {1.9, 1});
    CHECK(c.lower == doctest::Approx(expect).epsilon(1e-12));

    Envelope g = heat_kernel_envelope(PhasePoint::zero(1), z, e, 1, 0);
    CHECK(std::isnan(g.lower));
    CHECK(g.upper_shape == doctest::Approx(std::pow(e.t, -(2.0 + 1.0) / 1.2 - 1.0 - 1.0) * n *
                                           std::pow(1.0, 3.0 + 4.0 + 3.6))
                               .epsilon(1e-12));
}

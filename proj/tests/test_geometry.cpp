#include <doctest.h>

#include <cmath>

#include "ksk/geometry.hpp"
#include "ksk/rng.hpp"

using namespace ksk;

TEST_CASE("chord map basics") {
    CHECK(chord(PhasePoint({1.0}, {2.0}), 0.5)[0] == doctest::Approx(0.0));
    PhasePoint z({1.5, -2.0}, {0.3, 0.7});
    CHECK(chord(z, 0.0) == z.x);
    Vec g = chord(PhasePoint({1.0, 0.0}, {0.0, 1.0}), 1.0);
    CHECK(g[0] == doctest::Approx(1.0));
    CHECK(g[1] == doctest::Approx(-1.0));
}

TEST_CASE("dilate") {
    PhasePoint z({8.0}, {2.0});
    PhasePoint a = dilate(z, 1.0, 1.3);
    CHECK(a.x[0] == doctest::Approx(8.0));
    CHECK(a.v[0] == doctest::Approx(2.0));
    PhasePoint b = dilate(z, 4.0, 1.0);
    CHECK(b.x[0] == doctest::Approx(0.5));
    CHECK(b.v[0] == doctest::Approx(0.5));
    PhasePoint c = dilate(PhasePoint({1.0}, {1.0}), 0.25, 2.0);
    CHECK(c.x[0] == doctest::Approx(8.0));
    CHECK(c.v[0] == doctest::Approx(2.0));
    CHECK_THROWS_AS(dilate(z, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(dilate(z, -1.0, 1.0), std::domain_error);
}

TEST_CASE("shear group") {
    PhasePoint z({0.0}, {1.0});
    PhasePoint s = shear(z, 2.0);
    CHECK(s.x[0] == doctest::Approx(2.0));
    CHECK(s.v[0] == doctest::Approx(1.0));
    CHECK(shear(z, 0.0).x == z.x);

    CounterRng rng(11, 0);
    for (int it = 0; it < 200; ++it) {
        PhasePoint w({rng.normal() * 5, rng.normal() * 5}, {rng.normal() * 5, rng.normal() * 5});
        double t = rng.normal() * 3, u = rng.normal() * 3;
        PhasePoint back = shear(shear(w, t), -t);
        for (int i = 0; i < 2; ++i)
            CHECK(back.x[i] == doctest::Approx(w.x[i]).epsilon(1e-14));
        PhasePoint ab = shear(shear(w, t), u);
        PhasePoint once = shear(w, t + u);
        for (int i = 0; i < 2; ++i)
            CHECK(ab.x[i] == doctest::Approx(once.x[i]).epsilon(2e-14));
    }
}

TEST_CASE("min_chord closed form on the three regions") {
    auto m1 = min_chord(PhasePoint({1.0, 0.0}, {-1.0, 0.0}));
    CHECK(m1.s_star == doctest::Approx(0.0));
    CHECK(m1.value == doctest::Approx(1.0));
    auto m2 = min_chord(PhasePoint({1.0, 1.0}, {2.0, 0.0}));
    CHECK(m2.s_star == doctest::Approx(0.5));
    CHECK(m2.value == doctest::Approx(1.0));
    auto m3 = min_chord(PhasePoint({3.0}, {1.0}));
    CHECK(m3.s_star == doctest::Approx(1.0));
    CHECK(m3.value == doctest::Approx(2.0));
    // v = 0 convention: s0 = 0
    auto m4 = min_chord(PhasePoint({2.0, 1.0}, {0.0, 0.0}));
    CHECK(m4.s_star == 0.0);
    CHECK(m4.value == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("min_chord equals a dense grid search") {
    CounterRng rng(42, 0);
    for (int it = 0; it < 2000; ++it) {
        int d = 1 + static_cast<int>(rng.next_u64() % 3);
        Vec x(d), v(d);
        for (int i = 0; i < d; ++i) {
            x[i] = rng.normal() * 10;
            v[i] = rng.normal() * 10;
        }
        PhasePoint z(x, v);
        auto mc = min_chord(z);
        double best = HUGE_VAL;
        const int n = 2000;
        for (int k = 0; k <= n; ++k) best = std::min(best, norm(chord(z, double(k) / n)));
        // |chord| is |v|-Lipschitz in s, so the grid minimum is within
        // |v|/(2n) of the true infimum
        double slack = norm(v) / (2.0 * n) + 1e-12;
        CHECK(mc.value <= best + 1e-12);
        CHECK(mc.value >= best - slack);
    }
}

#include "ksk/special.hpp"

#include <cmath>
#include <stdexcept>

#include "ksk/quad.hpp"

namespace ksk::special {

namespace {

constexpr double kSeriesCut = 7.0;   // series below, panels + asymptotics above
constexpr double kAsympCut = 50.0;   // oscillatory tails expanded beyond this

// int_y^inf trig(s) s^{-p} ds by the integration-by-parts asymptotic series,
// truncated at the smallest term. Valid for y >= kAsympCut.
// cos_part: true -> cos, false -> sin.
double trig_tail_asymptotic(double y, double p, bool cos_part) {
    // sin: cos(y) y^-p - p * [cos-tail with p+1]
    // cos: -sin(y) y^-p + p * [sin-tail with p+1]
    double sum = 0.0;
    double coef = 1.0;
    double last_env = HUGE_VAL;
    bool is_cos = cos_part;
    for (int m = 0; m < 40; ++m) {
        // envelope |coef| y^-p rather than the term itself, so a vanishing
        // trig factor cannot fake convergence of the divergent series
        double env = std::abs(coef) * std::pow(y, -p);
        if (env > last_env) break;  // stop at the smallest term
        double lead = is_cos ? -std::sin(y) : std::cos(y);
        sum += coef * lead * std::pow(y, -p);
        last_env = env;
        coef *= is_cos ? p : -p;
        p += 1.0;
        is_cos = !is_cos;
    }
    return sum;
}

// int_y^inf trig(s) s^{-1-alpha} ds for arbitrary y > 0.
double trig_tail(double y, double alpha, bool cos_part) {
    double p = 1.0 + alpha;
    if (y >= kAsympCut) return trig_tail_asymptotic(y, p, cos_part);
    auto f = [&](double s) {
        return (cos_part ? std::cos(s) : std::sin(s)) * std::pow(s, -p);
    };
    int panels = static_cast<int>((kAsympCut - y) / 1.5) + 2;
    double head = quad::gl_panels(f, y, kAsympCut, panels, 16);
    return head + trig_tail_asymptotic(kAsympCut, p, cos_part);
}

}  // namespace

double sphere_area(int d) {
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

double sphere_abs_moment(int d, double p) {
    return std::exp(std::lgamma(0.5 * (p + 1)) + std::lgamma(0.5 * d) -
                    std::lgamma(0.5) - std::lgamma(0.5 * (d + p)));
}

double cos_compensated(double x, double alpha) {
    if (x <= 0.0) return 0.0;
    if (x <= kSeriesCut) {
        // sum_{k>=1} (-1)^{k+1} x^{2k-alpha} / ((2k)! (2k-alpha))
        double sum = 0.0;
        double pw = std::pow(x, 2.0 - alpha) / 2.0;  // x^{2k-a}/(2k)! at k=1
        for (int k = 1; k < 200; ++k) {
            double term = pw / (2.0 * k - alpha);
            sum += (k % 2 == 1) ? term : -term;
            if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
            pw *= x * x / ((2.0 * k + 1) * (2.0 * k + 2));
        }
        return sum;
    }
    double base = cos_compensated(kSeriesCut, alpha);
    double power_part = (std::pow(kSeriesCut, -alpha) - std::pow(x, -alpha)) / alpha;
    double osc = trig_tail(kSeriesCut, alpha, true) - trig_tail(x, alpha, true);
    return base + power_part - osc;
}

double stable_cos_constant(double alpha) {
    return cos_compensated(kSeriesCut, alpha) +
           std::pow(kSeriesCut, -alpha) / alpha - trig_tail(kSeriesCut, alpha, true);
}

double sin_compensated(double x, double alpha) {
    if (x <= 0.0) return 0.0;
    if (x <= kSeriesCut) {
        // sum_{k>=1} (-1)^{k+1} x^{2k+1-alpha} / ((2k+1)! (2k+1-alpha))
        double sum = 0.0;
        double pw = std::pow(x, 3.0 - alpha) / 6.0;
        for (int k = 1; k < 200; ++k) {
            double term = pw / (2.0 * k + 1 - alpha);
            sum += (k % 2 == 1) ? term : -term;
            if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
            pw *= x * x / ((2.0 * k + 2) * (2.0 * k + 3));
        }
        return sum;
    }
    double base = sin_compensated(kSeriesCut, alpha);
    double power_part = (alpha == 1.0)
                            ? std::log(x / kSeriesCut)
                            : (std::pow(x, 1.0 - alpha) - std::pow(kSeriesCut, 1.0 - alpha)) /
                                  (1.0 - alpha);
    double osc = trig_tail(kSeriesCut, alpha, false) - trig_tail(x, alpha, false);
    return base + power_part - osc;
}

double sin_tail(double x, double alpha) {
    if (x <= 0.0) throw std::domain_error("sin_tail: x must be positive");
    if (x >= kSeriesCut) return trig_tail(x, alpha, false);
    // below the series cut the integrand is steeply singular; route through
    // the compensated primitive: int_x^c sin = int_x^c s^-a - int_x^c (s - sin)
    double power_part = (alpha == 1.0)
                            ? std::log(kSeriesCut / x)
                            : (std::pow(kSeriesCut, 1.0 - alpha) - std::pow(x, 1.0 - alpha)) /
                                  (1.0 - alpha);
    return power_part - (sin_compensated(kSeriesCut, alpha) - sin_compensated(x, alpha)) +
           trig_tail(kSeriesCut, alpha, false);
}

double isotropic_exponent_constant(int d, double alpha) {
    if (d < 1) throw std::domain_error("dimension must be >= 1");
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::domain_error("alpha must lie in (0,2)");
    return stable_cos_constant(alpha) * sphere_area(d) * sphere_abs_moment(d, alpha);
}

double betainc(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // continued fraction (Lentz), with the symmetry switch at the usual pivot
    if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - betainc(b, a, 1.0 - x);
    double ln_front = a * std::log(x) + b * std::log1p(-x) - std::log(a) +
                      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    double front = std::exp(ln_front);
    // modified Lentz on 1 + d1/(1 + d2/(1 + ...))
    double f = 1.0, c = 1.0, dd = 0.0;
    for (int i = 1; i <= 500; ++i) {
        int m = i / 2;
        double num;
        if (i % 2 == 0)
            num = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
        else
            num = -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
        dd = 1.0 + num * dd;
        if (std::abs(dd) < 1e-300) dd = 1e-300;
        dd = 1.0 / dd;
        c = 1.0 + num / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        f *= c * dd;
        if (std::abs(1.0 - c * dd) < 1e-15) break;
    }
    return front / f;
}

namespace {
// smallest x with betainc(a,b,x) >= target
double betainc_inv(double a, double b, double target) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (betainc(a, b, mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}
}  // namespace

void clopper_pearson(long k, long n, double conf, double* lo, double* hi) {
    double tail = 0.5 * (1.0 - conf);
    *lo = (k == 0) ? 0.0 : betainc_inv(static_cast<double>(k), static_cast<double>(n - k + 1), tail);
    *hi = (k == n) ? 1.0
                   : betainc_inv(static_cast<double>(k + 1), static_cast<double>(n - k), 1.0 - tail);
}

}  // namespace ksk::special

#pragma once

#include <functional>
#include <vector>

namespace ksk::quad {

struct GLRule {
    std::vector<double> nodes;    // on (-1,1)
    std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule, cached per n.
const GLRule& gauss_legendre(int n);

// Composite n-point Gauss-Legendre over [a,b] split into `panels` equal panels.
double gl_panels(const std::function<double(double)>& f, double a, double b,
                 int panels, int n = 16);

// Adaptive Gauss-Kronrod (G7,K15) bisection. Stops when the local error
// estimate summed over active intervals is below rel_tol*|I| + abs_tol.
// Throws AccuracyError (with the running estimate) if max_evals is exhausted.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol, double abs_tol = 0.0, int max_evals = 200000);

}  // namespace ksk::quad

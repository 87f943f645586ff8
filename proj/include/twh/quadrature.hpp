#pragma once

#include <functional>
#include <vector>

#include "twh/ratcalc.hpp"

namespace twh {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// 20-point Gauss-Legendre on each of `panels` equal subintervals of (a, b).
QuadratureRule gauss_panels(double a, double b, int panels);

struct LineIntegral {
    cplx value;
    double error = 0.0;
};

// Integral of f over the real line. Interior pieces use tanh-sinh between
// sorted breakpoints (endpoint singularities allowed); the tails are paired as
// f(xi) + f(-xi) so O(1/xi) terms cancel, then mapped to (0, 1) by xi = B/t.
LineIntegral integrate_real_line(const std::function<cplx(double)>& f, std::vector<double> breaks);

}  // namespace twh

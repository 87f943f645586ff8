#include "twh/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "twh/error.hpp"

namespace twh {

namespace {

using Gauss20 = boost::math::quadrature::gauss<double, 20>;

}  // namespace

QuadratureRule gauss_panels(double a, double b, int panels) {
    if (panels < 1 || !(b > a)) throw InputError("invalid quadrature panels");
    const auto& xs = Gauss20::abscissa();
    const auto& ws = Gauss20::weights();
    QuadratureRule r;
    r.nodes.reserve(20 * panels);
    r.weights.reserve(20 * panels);
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        const double mid = a + (k + 0.5) * h;
        // abscissa() holds the 10 positive nodes; emit them in increasing order
        for (int i = int(xs.size()) - 1; i >= 0; --i) {
            r.nodes.push_back(mid - 0.5 * h * xs[i]);
            r.weights.push_back(0.5 * h * ws[i]);
        }
        for (size_t i = 0; i < xs.size(); ++i) {
            r.nodes.push_back(mid + 0.5 * h * xs[i]);
            r.weights.push_back(0.5 * h * ws[i]);
        }
    }
    return r;
}

LineIntegral integrate_real_line(const std::function<cplx(double)>& f, std::vector<double> breaks) {
    double B = 1.0;
    for (double b : breaks) B = std::max(B, std::abs(b) + 1.0);
    breaks.push_back(-B);
    breaks.push_back(B);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                 breaks.end());

    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    LineIntegral out;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        double err = 0.0;
        out.value += ts.integrate(f, breaks[i], breaks[i + 1], 1e-13, &err);
        out.error += err;
    }

    const auto tail = [&](double t) { return (f(B / t) + f(-B / t)) * (B / (t * t)); };
    cplx coarse = 0.0, fine = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const auto rule = gauss_panels(0.0, 1.0, pass == 0 ? 4 : 8);
        cplx s = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * tail(rule.nodes[i]);
        (pass == 0 ? coarse : fine) = s;
    }
    out.value += fine;
    out.error += std::abs(fine - coarse);
    if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
        throw NumericalError("non-finite quadrature value");
    return out;
}

}  // namespace twh

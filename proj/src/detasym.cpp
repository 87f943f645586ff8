#include "twh/detasym.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twh/error.hpp"
#include "twh/invapprox.hpp"
#include "twh/quadrature.hpp"

namespace twh {

namespace {

const cplx I(0.0, 1.0);
constexpr double kPi = std::numbers::pi;
constexpr double kCheckTol = 1e-6;
constexpr double kDualTol = 1e-10;

// Logarithm of xi - z continued along the real line from xi = +inf.
cplx log_factor(double xi, const Root& z) {
    const cplx v = xi - z.z;
    if (v.imag() == 0.0 && v.real() < 0.0) return std::log(-v.real()) - double(half_plane(z)) * kPi * I;
    return std::log(v);
}

cplx continuous_log(const RationalFunction& r, double xi) {
    cplx s = std::log(r.scale());
    for (const auto& z : r.zeros()) s += log_factor(xi, z);
    for (const auto& w : r.poles()) s -= log_factor(xi, w);
    return s;
}

std::vector<double> breakpoints(const Factorization& f) {
    std::vector<double> b;
    if (!f.regular()) {
        b.push_back(f.p());
        b.push_back(-f.p());
    }
    for (const auto* r : {&f.sigma_plus, &f.sigma_minus}) {
        for (const auto& z : r->zeros()) b.push_back(z.z.real());
        for (const auto& w : r->poles()) b.push_back(w.z.real());
    }
    return b;
}

RationalFunction shifted(const RationalFunction& r, double eps) {
    auto move = [eps](std::vector<Root> rs) {
        for (auto& z : rs)
            if (z.on_axis()) z = Root{z.z + I * (eps * half_plane(z))};
        return rs;
    };
    return RationalFunction(move(r.zeros()), move(r.poles()), r.scale());
}

const Root* boundary_zero(const RationalFunction& r) {
    for (const auto& z : r.zeros())
        if (z.on_axis()) return &z;
    return nullptr;
}

cplx e_integral(const RationalFunction& sp, const RationalFunction& sm, std::vector<double> breaks) {
    const auto integrand = [&](double xi) { return sp.log_derivative(xi) * continuous_log(sm, xi); };
    const auto r = integrate_real_line(integrand, std::move(breaks));
    return std::exp(r.value / (2.0 * kPi * I));
}

void require_singular(const Factorization& f) {
    if (f.regular()) throw InputError("use kac for regular symbols");
}

}  // namespace

const char* method_name(DetMethod m) {
    switch (m) {
        case DetMethod::kac: return "kac";
        case DetMethod::thm3: return "thm3";
        case DetMethod::thm4: return "thm4";
        case DetMethod::dual: return "dual";
        default: return "oracle";
    }
}

DetMethod parse_method(const std::string& name) {
    for (auto m : {DetMethod::kac, DetMethod::thm3, DetMethod::thm4, DetMethod::dual, DetMethod::oracle})
        if (name == method_name(m)) return m;
    throw InputError("unknown method: " + name);
}

cplx log_g_constant(const Factorization& f) {
    const auto sigma = f.symbol.sigma();
    cplx s = 0.0;
    for (const auto& z : sigma.zeros()) s += z.z * double(half_plane(z));
    for (const auto& w : sigma.poles()) s -= w.z * double(half_plane(w));
    return -0.5 * I * s;
}

cplx g_constant(const Factorization& f) { return std::exp(log_g_constant(f)); }

cplx log_g_quadrature(const Factorization& f) {
    const auto sigma = f.symbol.sigma();
    const auto r = integrate_real_line([&](double xi) { return continuous_log(sigma, xi); }, breakpoints(f));
    return r.value / (2.0 * kPi);
}

cplx e_constant(const Factorization& f) {
    const Root* skip = f.p() == 0.0 && !f.regular() ? boundary_zero(f.sigma_plus) : nullptr;
    cplx e = 1.0;
    for (const auto& b : f.sigma_plus.poles()) e *= f.sigma_minus(b.z);
    for (const auto& a : f.sigma_plus.zeros())
        if (&a != skip) e /= f.sigma_minus(a.z);
    if (skip) e /= f.tau_minus(0.0);
    return e;
}

EQuadrature e_quadrature(const Factorization& f) {
    EQuadrature q;
    const auto breaks = breakpoints(f);
    if (f.regular()) {
        q.value = e_integral(f.sigma_plus, f.sigma_minus, breaks);
        return q;
    }
    // shifts measured against the smallest feature of the symbol
    double scale = f.p() != 0.0 ? std::abs(f.p()) : 1.0;
    for (const auto& r : f.symbol.tau.zeros()) scale = std::min(scale, std::abs(r.z.imag()));
    for (const auto& r : f.symbol.tau.poles()) scale = std::min(scale, std::abs(r.z.imag()));
    const double h = 1e-2 * std::min(1.0, scale);
    for (double eps : {h, h / 2, h / 4}) {
        const auto sp = shifted(f.sigma_plus, eps);
        const auto sm = shifted(f.sigma_minus, eps);
        cplx e = e_integral(sp, sm, breaks);
        if (f.p() == 0.0) {
            // The coinciding zeros make E(eps) ~ 1/(2 eps); strip that factor.
            const Root* a = boundary_zero(f.sigma_plus);
            e *= sm(a->z - I * eps) / f.tau_minus(0.0);
        }
        q.shifted.push_back(e);
    }
    const cplx r0 = 2.0 * q.shifted[1] - q.shifted[0];
    const cplx r1 = 2.0 * q.shifted[2] - q.shifted[1];
    q.value = (4.0 * r1 - r0) / 3.0;
    q.error_estimate = std::abs(q.value - r1);
    if (!std::isfinite(q.error_estimate) || q.error_estimate > 1e-4 * std::abs(q.value))
        throw NumericalError("E quadrature failed");
    return q;
}

double check_constants(const Factorization& f) {
    const cplx lg = log_g_constant(f);
    const cplx lgq = log_g_quadrature(f);
    const double dg = std::abs(lg - lgq) / std::max(1.0, std::abs(lg));
    if (!(dg <= kCheckTol)) throw NumericalError("branch inconsistency");
    const cplx e = e_constant(f);
    const auto eq = e_quadrature(f);
    const double de = std::abs(e - eq.value) / std::abs(e);
    if (!(de <= kCheckTol)) throw NumericalError("E quadrature failed");
    return std::max(dg, de);
}

cplx thm3_prefactor(const Factorization& f, double alpha) {
    require_singular(f);
    const double p = f.p();
    const cplx a = f.tau_minus_at_p * f.tau_plus_at_minus_p;
    const cplx b = f.tau_plus_at_p * f.tau_minus_at_minus_p;
    return (a - b * std::exp(2.0 * I * alpha * p)) / a;
}

cplx thm3_prefactor_zero(const Factorization& f, double alpha0) {
    require_singular(f);
    const double p = f.p();
    if (p == 0.0) throw InputError("use thm4 for p = 0");
    const cplx a = f.tau_minus_at_p * f.tau_plus_at_minus_p;
    const cplx b = f.tau_plus_at_p * f.tau_minus_at_minus_p;
    // zeros of a - b e^{2izp}: z = (Log(a/b) + 2 pi i k) / (2ip), spaced pi/p along the real axis
    if (a == 0.0 || b == 0.0) throw NumericalError("prefactor has no zeros");
    const cplx z0 = std::log(a / b) / (2.0 * I * p);
    const double period = std::numbers::pi / std::abs(p);
    return z0 + period * std::round((alpha0 - z0.real()) / period);
}

DetReport det_kac(const Factorization& f, double alpha) {
    if (!f.regular()) throw InputError("use thm3/thm4");
    DetReport r;
    r.method = DetMethod::kac;
    r.alpha = alpha;
    const cplx lg = log_g_constant(f);
    r.G = std::exp(lg);
    r.E = e_constant(f);
    r.value = std::exp(alpha * lg) * r.E;
    r.quadrature_error_estimate = check_constants(f);
    return r;
}

DetReport det_thm3(const Factorization& f, double alpha) {
    require_singular(f);
    if (f.p() == 0.0) throw InputError("use thm4 for p = 0");
    if (f.symbol.contour != Contour::C1) throw InputError("thm3 uses the C1 factorization");
    DetReport r;
    r.method = DetMethod::thm3;
    r.alpha = alpha;
    const cplx lg = log_g_constant(f);
    r.G = std::exp(lg);
    r.E = e_constant(f);
    const cplx pre = thm3_prefactor(f, alpha);
    r.value = std::exp(alpha * lg) * pre * r.E;
    r.resonance_distance = std::abs(pre);
    try {
        const auto A = constant_A(f, alpha);
        r.A_or_B = A.value;
        if (A.near_resonance) r.warnings.push_back("near resonance");
    } catch (const ResonanceError&) {
        r.warnings.push_back("resonant α: leading term vanishes");
    }
    r.quadrature_error_estimate = check_constants(f);
    return r;
}

DetReport det_thm4(const Factorization& f, double alpha) {
    require_singular(f);
    if (f.p() != 0.0) throw InputError("use thm3 for p != 0");
    DetReport r;
    r.method = DetMethod::thm4;
    r.alpha = alpha;
    const cplx lg = log_g_constant(f);
    r.G = std::exp(lg);
    r.E = e_constant(f);
    const cplx B = constant_B(f, alpha);
    r.A_or_B = B;
    r.value = std::exp(alpha * lg) * B * r.E;
    if (alpha < 1.0) r.warnings.push_back("small alpha");
    r.quadrature_error_estimate = check_constants(f);
    return r;
}

DetReport det_dual(const SingularSymbol& s, double alpha) {
    if (s.regular || s.p == 0.0) throw InputError("dual representation needs two simple zeros");
    const auto f1 = factorize(s.with_contour(Contour::C1));
    const auto f2 = factorize(s.with_contour(Contour::C2));
    const cplx lg1 = log_g_constant(f1), lg2 = log_g_constant(f2);
    const cplx e1 = e_constant(f1), e2 = e_constant(f2);
    const double p = s.p;

    const cplx ratio = -(f1.tau_minus_at_p / f1.tau_minus_at_minus_p) * (f1.tau_plus_at_minus_p / f1.tau_plus_at_p);
    if (std::abs((lg1 - lg2) + 2.0 * I * p) > kDualTol * std::max(1.0, std::abs(lg1)) ||
        std::abs(e1 - ratio * e2) > kDualTol * std::abs(e1))
        throw NumericalError("dual factorization inconsistent");

    DetReport r;
    r.method = DetMethod::dual;
    r.alpha = alpha;
    r.G = std::exp(lg1);
    r.E = e1;
    r.G2 = std::exp(lg2);
    r.E2 = e2;
    r.value = std::exp(alpha * lg1) * e1 + std::exp(alpha * lg2) * e2;
    r.resonance_distance = std::abs(thm3_prefactor(f1, alpha));
    r.quadrature_error_estimate = std::max(check_constants(f1), check_constants(f2));
    return r;
}

DetReport asymptotic_determinant(const SingularSymbol& s, double alpha, DetMethod method) {
    switch (method) {
        case DetMethod::kac: return det_kac(factorize(s), alpha);
        case DetMethod::thm3: return det_thm3(factorize(s.with_contour(Contour::C1)), alpha);
        case DetMethod::thm4: return det_thm4(factorize(s), alpha);
        case DetMethod::dual: return det_dual(s, alpha);
        default: throw InputError("oracle determinants come from the oracle module");
    }
}

}  // namespace twh

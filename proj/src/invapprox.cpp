#include "twh/invapprox.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twh/error.hpp"

namespace twh {

namespace {

const cplx I(0.0, 1.0);

ExpSum exp_wave(double p) { return ExpSum({{Support::positive, 1.0, 0, I * p}}); }

void require_two_zero(const Factorization& f) {
    if (f.regular()) throw InputError("symbol has no real zeros; use the regular inverse");
    if (f.symbol.contour != Contour::C1) throw InputError("inverse kernels need the C1 factorization");
}

PartialFractions inverse_pf(const RationalFunction& r) { return partial_fractions(r.inverse()); }

KernelFactor wiener_factor(const PartialFractions& v) {
    return KernelFactor::convolution(v.constant, convolution_profile(v));
}

KernelFactor hankel_factor(const PartialFractions& v) { return KernelFactor::hankel(hankel_profile(v)); }

// P W(a) W(b) P - s * Q H(c) H(d) Q
Kernel2D main_kernel(const PartialFractions& a, const PartialFractions& b, const PartialFractions& c,
                     const PartialFractions& d, double alpha, cplx s) {
    const Kernel2D ww = compose_kernels(wiener_factor(a), wiener_factor(b)).with_alpha(alpha);
    const Kernel2D hh = compose_kernels(hankel_factor(c), hankel_factor(d)).with_alpha(alpha);
    return ww - hh.flipped() * s;
}

Profile direct(const ExpSum& f, double alpha) { return Profile{f, ExpSum(), alpha}; }
Profile flipped(const ExpSum& f, double alpha) { return Profile{ExpSum(), f, alpha}; }

}  // namespace

ExpSum convolution_profile(const PartialFractions& v) {
    PartialFractions w = v;
    w.constant = 0.0;
    return inverse_fourier(w);
}

ExpSum hankel_profile(const PartialFractions& v) {
    PartialFractions w;
    for (const auto& t : v.terms)
        if (half_plane(t.pole) < 0) w.terms.push_back(t);
    return inverse_fourier(w);
}

ConstantA constant_A(const Factorization& f, double alpha) {
    require_two_zero(f);
    const double p = f.p();
    if (p == 0.0) throw InputError("constant A needs p != 0");
    const cplx e = std::exp(I * alpha * p);
    const cplx den = f.tau_minus_at_p * f.tau_plus_at_minus_p / e - f.tau_plus_at_p * f.tau_minus_at_minus_p * e;
    ConstantA a;
    a.resonance_distance = std::abs(den);
    if (a.resonance_distance < 1e-12) throw ResonanceError("resonant α");
    a.value = 2.0 * I * p / den;
    a.near_resonance = a.resonance_distance < std::exp(-alpha / 10.0);
    return a;
}

cplx resonance_near(const Factorization& f, double alpha0) {
    require_two_zero(f);
    const double p = f.p();
    if (p == 0.0) throw InputError("constant A needs p != 0");
    const cplx a = f.tau_minus_at_p * f.tau_plus_at_minus_p, b = f.tau_plus_at_p * f.tau_minus_at_minus_p;
    // zeros of a - b e^{2izp}: z = (Log(a/b) + 2 pi i k) / (2ip), spaced pi/p along the real axis
    if (a == 0.0 || b == 0.0) throw NumericalError("A has no resonances");
    const cplx z0 = std::log(a / b) / (2.0 * I * p);
    const double period = std::numbers::pi / std::abs(p);
    return z0 + period * std::round((alpha0 - z0.real()) / period);
}

cplx constant_B(const Factorization& f, double alpha) {
    require_two_zero(f);
    if (f.p() != 0.0) throw InputError("constant B needs p = 0");
    const cplx tm = f.tau_minus_at_p, tp = f.tau_plus_at_p;
    if (std::abs(tm - tp) > 1e-12 * std::abs(tm)) throw NumericalError("unbalanced factors");
    return alpha + I * f.d_ratio;
}

ZetaEta zeta_eta(const Factorization& f) {
    require_two_zero(f);
    const double p = f.p();
    if (p == 0.0) {
        const ExpSum one = exp_wave(0.0);
        return {apply_hankel(hankel_profile(f.u_plus), one), apply_hankel(hankel_profile(f.u_minus.reflected()), one)};
    }
    const ExpSum ep = exp_wave(p);
    return {apply_hankel(hankel_profile(inverse_pf(f.sigma_plus)), ep),
            apply_hankel(hankel_profile(inverse_pf(f.sigma_minus).reflected()), ep)};
}

ApproxInverse regular_inverse_kernel(const Factorization& f, double alpha) {
    if (!f.regular()) throw InputError("use thm1/thm2");
    if (!(alpha > 0.0)) throw InputError("alpha must be positive");
    const auto ip = inverse_pf(f.sigma_plus);
    const auto im = inverse_pf(f.sigma_minus);
    ApproxInverse inv;
    inv.kind = InverseKind::regular;
    inv.alpha = alpha;
    inv.kernel = main_kernel(ip, im, im.reflected(), ip, alpha, 1.0);
    return inv;
}

ApproxInverse thm1_inverse_kernel(const Factorization& f, double alpha, TensorOrder order) {
    require_two_zero(f);
    if (f.p() == 0.0) throw InputError("use thm2 for p = 0");
    if (!(alpha > 0.0)) throw InputError("alpha must be positive");
    const auto A = constant_A(f, alpha);
    const auto ip = inverse_pf(f.sigma_plus);
    const auto im = inverse_pf(f.sigma_minus);

    ApproxInverse inv;
    inv.kind = InverseKind::thm1;
    inv.alpha = alpha;
    inv.constant = A.value;
    inv.kernel = main_kernel(ip, im, im.reflected(), ip, alpha, 1.0);

    const auto [zeta, eta] = zeta_eta(f);
    const cplx e = std::exp(I * alpha * f.p());
    const cplx cross = A.value * e * f.tau_plus_at_p * f.tau_minus_at_minus_p;
    inv.rank_terms = {
        {direct(zeta, alpha), direct(eta, alpha), cross},
        {direct(zeta, alpha), flipped(zeta, alpha), -A.value * f.tau_plus_at_p * f.tau_plus_at_minus_p},
        {flipped(eta, alpha), direct(eta, alpha), -A.value * f.tau_minus_at_p * f.tau_minus_at_minus_p},
    };
    if (order == TensorOrder::eta_zeta)
        inv.rank_terms.push_back({flipped(eta, alpha), flipped(zeta, alpha), cross});
    else
        inv.rank_terms.push_back({flipped(zeta, alpha), flipped(eta, alpha), cross});
    return inv;
}

ApproxInverse thm2_inverse_kernel(const Factorization& f, double alpha) {
    require_two_zero(f);
    if (f.p() != 0.0) throw InputError("use thm1 for p != 0");
    if (!(alpha > 0.0)) throw InputError("alpha must be positive");
    const cplx B = constant_B(f, alpha);
    if (B == 0.0) throw ResonanceError("resonant α");
    // Balanced factors with tau_{+-}(0) = t; the formulas below hold for any t.
    const cplx t = f.tau_plus_at_p;
    const auto ip = inverse_pf(f.sigma_plus);
    const auto im = inverse_pf(f.sigma_minus);
    const auto um_r = f.u_minus.reflected();

    ApproxInverse inv;
    inv.kind = InverseKind::thm2;
    inv.alpha = alpha;
    inv.constant = B;
    inv.kernel = main_kernel(ip, im, um_r, f.u_plus, alpha, 1.0 / (t * t));

    const auto [h_plus, h_minus] = zeta_eta(f);  // H(u_+)1, H(u~_-)1
    const ExpSum one = exp_wave(0.0);
    const ExpSum w_plus = apply_convolution(ip.constant, convolution_profile(ip), one);
    const auto im_r = im.reflected();
    const ExpSum w_minus = apply_convolution(im_r.constant, convolution_profile(im_r), one);
    inv.rank_terms = {{Profile{w_plus, h_minus * (1.0 / t), alpha}, Profile{w_minus, h_plus * (1.0 / t), alpha}, -1.0 / B}};
    return inv;
}

cplx eval_inverse_kernel(const ApproxInverse& inv, double x, double y) {
    if (!(x >= 0.0 && x <= inv.alpha && y >= 0.0 && y <= inv.alpha))
        throw InputError("kernel evaluation outside (0, alpha)");
    cplx v = inv.kernel(x, y);
    for (const auto& r : inv.rank_terms) v += r.coeff * r.left(x) * r.right(y);
    return v;
}

}  // namespace twh

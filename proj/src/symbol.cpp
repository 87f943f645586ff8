#include "twh/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twh/error.hpp"

namespace twh {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kResidueTol = 1e-10;
const cplx I(0.0, 1.0);

bool has_repeats(const std::vector<Root>& rs) {
    for (size_t i = 0; i < rs.size(); ++i)
        for (size_t j = i + 1; j < rs.size(); ++j)
            if (rs[i] == rs[j]) return true;
    return false;
}

// Removes the order-one term at `pole` from pf after checking its coefficient.
PartialFractions strip_boundary_pole(PartialFractions pf, const Root& pole, cplx expected) {
    auto it = std::find_if(pf.terms.begin(), pf.terms.end(),
                           [&](const PoleTerm& t) { return t.pole == pole && t.order == 1; });
    if (it == pf.terms.end() || std::abs(it->coeff - expected) > kResidueTol)
        throw NumericalError("residue mismatch at boundary zero");
    pf.terms.erase(it);
    return pf;
}

}  // namespace

SingularSymbol SingularSymbol::singular(double p, RationalFunction tau, Contour contour) {
    SingularSymbol s;
    s.p = p;
    s.tau = std::move(tau);
    s.contour = contour;
    return s;
}

SingularSymbol SingularSymbol::regular_symbol(RationalFunction sigma) {
    SingularSymbol s;
    s.tau = std::move(sigma);
    s.regular = true;
    return s;
}

RationalFunction SingularSymbol::sigma() const {
    if (regular) return tau;
    if (contour == Contour::C1) return tau.with_zero(above(p)).with_zero(below(-p));
    return tau.with_zero(above(-p)).with_zero(below(p));
}

SingularSymbol SingularSymbol::with_contour(Contour c) const {
    SingularSymbol s = *this;
    s.contour = c;
    return s;
}

SingularSymbol SingularSymbol::reflected() const {
    SingularSymbol s = *this;
    s.tau = tau.reflected();
    return s;
}

SingularSymbol normalized(const SingularSymbol& s) {
    const bool decays = s.regular ? s.tau.zeros().size() == s.tau.poles().size()
                                  : s.tau.poles().size() == s.tau.zeros().size() + 2;
    if (!decays || s.tau.scale() == 0.0) return s;
    SingularSymbol r = s;
    r.tau = s.tau * (1.0 / s.tau.scale());
    r.original_scale = s.original_scale * s.tau.scale();
    return r;
}

SingularSymbol preset_symbol(const std::string& name) {
    const RationalFunction cauchy({}, {Root{I}, Root{-I}}, 1.0);
    if (name == "sigma0") return SingularSymbol::singular(0.0, cauchy);
    if (name == "two-zeros-cauchy") return SingularSymbol::singular(1.0, cauchy);
    if (name == "regular-sqrt2") {
        const double r2 = std::sqrt(2.0);
        return SingularSymbol::regular_symbol(
            RationalFunction({Root{I * r2}, Root{-I * r2}}, {Root{I}, Root{-I}}, 1.0));
    }
    throw InputError("unknown preset: " + name);
}

std::vector<std::string> preset_names() { return {"sigma0", "two-zeros-cauchy", "regular-sqrt2"}; }

SymbolDiagnostics validate_symbol(const SingularSymbol& s) {
    SymbolDiagnostics d;
    const auto& t = s.tau;
    const size_t gap = s.regular ? 0 : 2;
    d.sigma_at_infinity = t.poles().size() == t.zeros().size() + gap ? t.scale() : cplx(0.0);

    d.pole_margin = std::numeric_limits<double>::infinity();
    for (const auto& w : t.poles()) d.pole_margin = std::min(d.pole_margin, std::abs(w.z.imag()));

    auto fail = [&d](const std::string& why) {
        d.passed = false;
        d.failure = why;
        return d;
    };

    if (!(s.p >= 0.0) || !std::isfinite(s.p)) return fail("p must be a nonnegative real");
    if (t.scale() == 0.0) return fail("symbol vanishes identically");
    for (const auto& r : t.zeros())
        if (r.z.imag() == 0.0) return fail("real zero in tau");
    for (const auto& r : t.poles())
        if (r.z.imag() == 0.0) return fail("real pole in tau");

    int sum = 0;
    for (const auto& r : t.zeros()) sum += r.z.imag() > 0 ? 1 : -1;
    for (const auto& r : t.poles()) sum -= r.z.imag() > 0 ? 1 : -1;
    d.winding = sum / 2;
    if (sum != 0) return fail("index nonzero");

    if (t.poles().size() != t.zeros().size() + gap)
        return fail(s.regular ? "regular symbol must tend to a constant" : "tau must decay like xi^-2");
    if (std::abs(d.sigma_at_infinity - 1.0) > kNormTol) return fail("unnormalized symbol");
    if (has_repeats(t.zeros()) || has_repeats(t.poles())) return fail("repeated zero or pole in tau");
    d.passed = true;
    return d;
}

Factorization factorize(const SingularSymbol& s) {
    const auto diag = validate_symbol(s);
    if (!diag.passed) throw InputError(diag.failure);

    std::vector<Root> zm, pm, zp, pp;
    for (const auto& r : s.tau.zeros()) (r.z.imag() > 0 ? zm : zp).push_back(r);
    for (const auto& r : s.tau.poles()) (r.z.imag() > 0 ? pm : pp).push_back(r);

    Factorization f;
    f.symbol = s;
    const double p = s.p;

    if (s.regular) {
        f.sigma_minus = RationalFunction(zm, pm, 1.0);
        f.sigma_plus = RationalFunction(zp, pp, s.tau.scale());
        f.tau_minus = f.sigma_minus;
        f.tau_plus = f.sigma_plus;
        return f;
    }

    // Scales chosen so that sigma_{+-}(inf) = 1.
    cplx sm = -I;
    cplx sp = I * s.tau.scale();
    if (p == 0.0) {
        const cplx rm = RationalFunction(zm, pm, sm)(0.0);
        const cplx rp = RationalFunction(zp, pp, sp)(0.0);
        const cplx r = std::sqrt(rp / rm);
        sm *= r;
        sp /= r;
    }
    f.tau_minus = RationalFunction(zm, pm, sm);
    f.tau_plus = RationalFunction(zp, pp, sp);

    const Root zero_minus = s.contour == Contour::C1 ? above(p) : above(-p);
    const Root zero_plus = s.contour == Contour::C1 ? below(-p) : below(p);
    f.sigma_minus = f.tau_minus.with_zero(zero_minus, I);
    f.sigma_plus = f.tau_plus.with_zero(zero_plus, -I);

    f.tau_minus_at_p = f.tau_minus(p);
    f.tau_minus_at_minus_p = f.tau_minus(-p);
    f.tau_plus_at_p = f.tau_plus(p);
    f.tau_plus_at_minus_p = f.tau_plus(-p);
    f.c_minus = f.tau_minus_at_p;
    f.c_plus = f.tau_plus_at_minus_p;

    if (p == 0.0) {
        f.tau_deriv_minus_0 = f.tau_minus.derivative(0.0);
        f.tau_deriv_plus_0 = f.tau_plus.derivative(0.0);
        // sigma_plus / sigma_minus = -tau_plus / tau_minus
        const cplx tm = f.tau_minus_at_p, tp = f.tau_plus_at_p;
        f.d_ratio = -(f.tau_deriv_plus_0 * tm - tp * f.tau_deriv_minus_0) / (tm * tm);
    }

    if (s.contour == Contour::C1) {
        // u_- = c_-/sigma_- - 1/(0 + i(xi - p)),  u_+ = c_+/sigma_+ - 1/(0 - i(xi + p))
        f.u_minus = strip_boundary_pole(partial_fractions(f.sigma_minus.inverse() * f.c_minus), above(p), -I);
        f.u_plus = strip_boundary_pole(partial_fractions(f.sigma_plus.inverse() * f.c_plus), below(-p), I);
    }
    return f;
}

UFunctions u_functions(const Factorization& f) {
    if (f.regular() || f.symbol.contour != Contour::C1) throw InputError("u functions need a C1 singular factorization");
    return {f.u_plus, f.u_minus};
}

}  // namespace twh

#pragma once

#include <string>
#include <vector>

#include "twh/ratcalc.hpp"

namespace twh {

// C1: sigma_minus carries the zero at p+0i and sigma_plus the one at -p-0i.
// C2: sigma_minus carries -p+0i and sigma_plus carries p-0i.
enum class Contour { C1, C2 };

// sigma(xi) = (xi^2 - p^2) tau(xi), or sigma = tau when regular.
struct SingularSymbol {
    double p = 0.0;
    RationalFunction tau;
    Contour contour = Contour::C1;
    bool regular = false;
    cplx original_scale = 1.0;

    static SingularSymbol singular(double p, RationalFunction tau, Contour contour = Contour::C1);
    static SingularSymbol regular_symbol(RationalFunction sigma);

    // Boundary zeros carry the side tags of the chosen contour.
    RationalFunction sigma() const;
    SingularSymbol with_contour(Contour c) const;
    // sigma(-xi), same contour.
    SingularSymbol reflected() const;
};

// Rescales tau so that sigma(inf) = 1 and records the factor removed.
SingularSymbol normalized(const SingularSymbol& s);

SingularSymbol preset_symbol(const std::string& name);
std::vector<std::string> preset_names();

struct SymbolDiagnostics {
    int winding = 0;
    cplx sigma_at_infinity;
    double pole_margin = 0.0;
    bool passed = false;
    std::string failure;
};

SymbolDiagnostics validate_symbol(const SingularSymbol& s);

struct Factorization {
    SingularSymbol symbol;
    RationalFunction sigma_plus, sigma_minus, tau_plus, tau_minus;
    // c/sigma_{+-} with the boundary pole removed; only for C1 singular symbols.
    PartialFractions u_plus, u_minus;
    cplx c_minus, c_plus;
    cplx tau_plus_at_p, tau_plus_at_minus_p, tau_minus_at_p, tau_minus_at_minus_p;
    // p = 0 only
    cplx d_ratio, tau_deriv_plus_0, tau_deriv_minus_0;

    double p() const { return symbol.p; }
    bool regular() const { return symbol.regular; }
};

Factorization factorize(const SingularSymbol& s);

struct UFunctions {
    PartialFractions u_plus, u_minus;
};

UFunctions u_functions(const Factorization& f);

}  // namespace twh

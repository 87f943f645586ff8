#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twh/ratcalc.hpp"
#include "twh/symbol.hpp"

namespace twh {

enum class DetMethod { kac, thm3, thm4, dual, oracle };

const char* method_name(DetMethod m);
DetMethod parse_method(const std::string& name);

struct DetReport {
    DetMethod method = DetMethod::kac;
    double alpha = 0.0;
    cplx G, E;
    std::optional<cplx> A_or_B;
    // Second contour, dual method only.
    std::optional<cplx> G2, E2;
    cplx value;
    double resonance_distance = 0.0;
    double quadrature_error_estimate = 0.0;
    std::vector<std::string> warnings;
};

// log G = (1/2pi) int log sigma, in closed form from the zeros and poles.
cplx log_g_constant(const Factorization& f);
cplx g_constant(const Factorization& f);
// Same integral by quadrature, with continuous branches along the real line.
cplx log_g_quadrature(const Factorization& f);

// E = prod sigma_-(b) / prod sigma_-(a) over poles b and zeros a of sigma_+.
// For p = 0 the coinciding boundary zeros are removed and the result is divided by tau_-(0).
cplx e_constant(const Factorization& f);

struct EQuadrature {
    cplx value;
    double error_estimate = 0.0;
    std::vector<cplx> shifted;  // values at eps = h, h/2, h/4
};

// Boundary zeros moved off the axis by eps on their recorded side, then
// Richardson extrapolation eps -> 0. h = 1e-2 min(1, |p|, |Im| of the roots of tau).
EQuadrature e_quadrature(const Factorization& f);

// Closed forms checked against quadrature; throws "branch inconsistency" or
// "E quadrature failed". Returns the larger relative discrepancy.
double check_constants(const Factorization& f);

// [tau_-(p) tau_+(-p) - tau_+(p) tau_-(-p) e^{2i alpha p}] / (tau_+(-p) tau_-(p))
cplx thm3_prefactor(const Factorization& f, double alpha);
// Zero of the prefactor nearest to alpha0 in the complex alpha plane.
cplx thm3_prefactor_zero(const Factorization& f, double alpha0);

DetReport det_kac(const Factorization& f, double alpha);
DetReport det_thm3(const Factorization& f, double alpha);
DetReport det_thm4(const Factorization& f, double alpha);
DetReport det_dual(const SingularSymbol& s, double alpha);

// Dispatches on method; `oracle` is not handled here.
DetReport asymptotic_determinant(const SingularSymbol& s, double alpha, DetMethod method);

}  // namespace twh

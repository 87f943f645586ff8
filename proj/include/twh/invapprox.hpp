#pragma once

#include <vector>

#include "twh/ratcalc.hpp"
#include "twh/symbol.hpp"

namespace twh {

// f(x) = direct(x) + reflected(alpha - x) on (0, alpha).
struct Profile {
    ExpSum direct;
    ExpSum reflected;
    double alpha = 0.0;

    cplx operator()(double x) const { return direct(x) + reflected(alpha - x); }
};

struct RankTerm {
    Profile left, right;
    cplx coeff;
};

enum class InverseKind { regular, thm1, thm2 };

// Order of the last tensor product in the two-zero inverse.
enum class TensorOrder {
    eta_zeta,  // Q eta (x) Q zeta
    zeta_eta,  // Q zeta (x) Q eta
};

inline constexpr TensorOrder kDefaultTensorOrder = TensorOrder::eta_zeta;

struct ApproxInverse {
    InverseKind kind = InverseKind::regular;
    double alpha = 0.0;
    // T = identity_coeff * I + kernel + sum of rank terms
    Kernel2D kernel;
    cplx constant;  // A for thm1, B for thm2
    std::vector<RankTerm> rank_terms;
};

struct ConstantA {
    cplx value;
    double resonance_distance = 0.0;  // |denominator|
    bool near_resonance = false;      // |denominator| < exp(-alpha/10)
};

ConstantA constant_A(const Factorization& f, double alpha);
cplx constant_B(const Factorization& f, double alpha);

// Zero of the denominator of A nearest to alpha0 in the complex alpha plane.
cplx resonance_near(const Factorization& f, double alpha0);

struct ZetaEta {
    ExpSum zeta, eta;
};

// zeta = H(1/sigma_+) e_p, eta = H(1/sigma~_-) e_p; for p = 0 returns H(u_+)1 and H(u~_-)1.
ZetaEta zeta_eta(const Factorization& f);

// Kernel of W(v) split as v(inf) * I + convolution by the returned profile.
ExpSum convolution_profile(const PartialFractions& v);
// Kernel of H(v); the value at infinity (a delta at the origin) does not contribute.
ExpSum hankel_profile(const PartialFractions& v);

ApproxInverse regular_inverse_kernel(const Factorization& f, double alpha);
ApproxInverse thm1_inverse_kernel(const Factorization& f, double alpha, TensorOrder order = kDefaultTensorOrder);
ApproxInverse thm2_inverse_kernel(const Factorization& f, double alpha);

// Kernel of T - I at (x, y), rank terms included.
cplx eval_inverse_kernel(const ApproxInverse& inv, double x, double y);

}  // namespace twh

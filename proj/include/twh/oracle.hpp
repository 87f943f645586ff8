#pragma once

#include <Eigen/Dense>
#include <vector>

#include "twh/ratcalc.hpp"
#include "twh/symbol.hpp"

namespace twh {

struct Discretization {
    double alpha = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    // I + diag(sqrt w) K diag(sqrt w)
    Eigen::MatrixXcd matrix;
};

// k with k^ = sigma - sigma(inf).
ExpSum convolution_kernel(const RationalFunction& sigma);
ExpSum convolution_kernel(const SingularSymbol& s);

// Nystrom discretization of I + K on (0, alpha); n is rounded up to whole 20-point panels.
Discretization discretize(const ExpSum& k, double alpha, int n);

struct OracleDeterminant {
    cplx value;   // extrapolated from the n and n/2 rules
    cplx fine;    // plain Nystrom value at n
    cplx coarse;  // plain Nystrom value at n/2
    double error_estimate = 0.0;
    int n = 0;
};

OracleDeterminant nystrom_determinant(const SingularSymbol& s, double alpha, int n);
// Plain (non-extrapolated) Nystrom determinant.
cplx nystrom_determinant_raw(const ExpSum& k, double alpha, int n);

class NystromResolvent {
public:
    NystromResolvent(const ExpSum& k, double alpha, int n);

    const Discretization& discretization() const { return disc_; }
    double rcond() const { return rcond_; }

    // r(x, y) of (I + K)^{-1} = I + R, by Nystrom interpolation.
    cplx operator()(double x, double y) const;
    // Many points at once; one solve per distinct y.
    Eigen::MatrixXcd evaluate(const std::vector<double>& xs, const std::vector<double>& ys) const;
    // r(x_i, x_j) at the nodes, weights divided out.
    Eigen::MatrixXcd node_samples() const;

private:
    ExpSum k_;
    Discretization disc_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    Eigen::VectorXd sqrt_w_;
    double rcond_ = 0.0;
};

// Node count of at least n whose panel count is a multiple of 2m, so that the points
// alpha*i/m sit on panel ends at both refinement levels.
int aligned_node_count(int n, int m);

// Resolvent kernel on a grid, Richardson-extrapolated from n and n/2 nodes.
struct ResolventGrid {
    Eigen::MatrixXcd values;  // values(i, j) = r(xs[i], ys[j])
    Eigen::MatrixXcd fine;
    double error_estimate = 0.0;
    double rcond = 0.0;
};

ResolventGrid nystrom_resolvent(const SingularSymbol& s, double alpha, int n, const std::vector<double>& xs,
                                const std::vector<double>& ys);

struct IdentityResiduals {
    double product_rule = 0.0;  // W(s1) W_a(s2) - W_a(s1 s2) + P H(s1) H(s2~) P + Q H(s1~) H(s2) Q
    double hankel_rule = 0.0;   // P [H(s1 s2) - W(s1) H(s2) - H(s1) W(s2~)] P
};

IdentityResiduals identity_residuals(const RationalFunction& s1, const RationalFunction& s2, double alpha, int n);

}  // namespace twh

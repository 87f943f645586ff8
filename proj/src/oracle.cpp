#include "twh/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "twh/error.hpp"
#include "twh/quadrature.hpp"

namespace twh {

namespace {

using Eigen::MatrixXcd;

constexpr double kMaxCondition = 1e12;

int panel_count(int n) {
    if (n < 10) throw InputError("need at least 10 nodes");
    return (n + 19) / 20;
}

// Richardson step for an O(h^2) error with h proportional to 1/panels.
template <class T>
T extrapolate(const T& fine, const T& coarse, int p_fine, int p_coarse) {
    const double h1 = 1.0 / p_fine, h2 = 1.0 / p_coarse;
    return (fine * (h2 * h2) - coarse * (h1 * h1)) / (h2 * h2 - h1 * h1);
}

MatrixXcd kernel_matrix(const ExpSum& k, const std::vector<double>& xs, const std::vector<double>& ys) {
    MatrixXcd m(xs.size(), ys.size());
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < ys.size(); ++j) m(i, j) = k(xs[i] - ys[j]);
    return m;
}

double spectral_norm(const MatrixXcd& m) {
    Eigen::BDCSVD<MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

}  // namespace

ExpSum convolution_kernel(const RationalFunction& sigma) {
    auto pf = partial_fractions(sigma);
    pf.constant = 0.0;
    return inverse_fourier(pf);
}

ExpSum convolution_kernel(const SingularSymbol& s) { return convolution_kernel(s.sigma()); }

Discretization discretize(const ExpSum& k, double alpha, int n) {
    if (!(alpha > 0.0)) throw InputError("alpha must be positive");
    const auto rule = gauss_panels(0.0, alpha, panel_count(n));
    Discretization d;
    d.alpha = alpha;
    d.nodes = rule.nodes;
    d.weights = rule.weights;
    const Eigen::Index m = Eigen::Index(d.nodes.size());
    d.matrix = MatrixXcd::Identity(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double si = std::sqrt(d.weights[i]);
        for (Eigen::Index j = 0; j < m; ++j) {
            const cplx v = k(d.nodes[i] - d.nodes[j]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("non-finite kernel entry");
            d.matrix(i, j) += si * v * std::sqrt(d.weights[j]);
        }
    }
    return d;
}

cplx nystrom_determinant_raw(const ExpSum& k, double alpha, int n) {
    const auto d = discretize(k, alpha, n);
    return d.matrix.partialPivLu().determinant();
}

OracleDeterminant nystrom_determinant(const SingularSymbol& s, double alpha, int n) {
    const auto k = convolution_kernel(s);
    const int p1 = panel_count(n);
    const int p2 = std::max(1, p1 / 2);
    OracleDeterminant r;
    r.n = 20 * p1;
    r.fine = nystrom_determinant_raw(k, alpha, 20 * p1);
    if (p2 == p1) {
        r.value = r.coarse = r.fine;
        return r;
    }
    r.coarse = nystrom_determinant_raw(k, alpha, 20 * p2);
    r.value = extrapolate(r.fine, r.coarse, p1, p2);
    r.error_estimate = std::abs(r.value - r.fine);
    return r;
}

NystromResolvent::NystromResolvent(const ExpSum& k, double alpha, int n) : k_(k), disc_(discretize(k, alpha, n)) {
    lu_.compute(disc_.matrix);
    rcond_ = lu_.rcond();
    if (!(rcond_ * kMaxCondition >= 1.0)) throw NumericalError("near-singular truncation");
    sqrt_w_.resize(Eigen::Index(disc_.weights.size()));
    for (size_t i = 0; i < disc_.weights.size(); ++i) sqrt_w_(Eigen::Index(i)) = std::sqrt(disc_.weights[i]);
}

Eigen::MatrixXcd NystromResolvent::evaluate(const std::vector<double>& xs, const std::vector<double>& ys) const {
    const auto& nodes = disc_.nodes;
    // columns: sqrt(w_j) k(x_j - y)
    const MatrixXcd b = sqrt_w_.asDiagonal() * kernel_matrix(k_, nodes, ys);
    const MatrixXcd v = lu_.solve(b);
    // rows: sqrt(w_i) k(x - x_i)
    const MatrixXcd a = kernel_matrix(k_, xs, nodes) * sqrt_w_.asDiagonal();
    return a * v - kernel_matrix(k_, xs, ys);
}

cplx NystromResolvent::operator()(double x, double y) const { return evaluate({x}, {y})(0, 0); }

Eigen::MatrixXcd NystromResolvent::node_samples() const {
    const Eigen::Index m = Eigen::Index(disc_.nodes.size());
    MatrixXcd r = lu_.solve(MatrixXcd::Identity(m, m)) - MatrixXcd::Identity(m, m);
    const Eigen::VectorXd inv = sqrt_w_.cwiseInverse();
    return inv.asDiagonal() * r * inv.asDiagonal();
}

int aligned_node_count(int n, int m) {
    if (m < 1) throw InputError("alignment must be positive");
    const int step = 2 * m;
    const int p = (panel_count(n) + step - 1) / step * step;
    return 20 * p;
}

ResolventGrid nystrom_resolvent(const SingularSymbol& s, double alpha, int n, const std::vector<double>& xs,
                                const std::vector<double>& ys) {
    const auto k = convolution_kernel(s);
    const int p1 = panel_count(n);
    const int p2 = std::max(1, p1 / 2);
    const NystromResolvent fine(k, alpha, 20 * p1);
    ResolventGrid g;
    g.fine = fine.evaluate(xs, ys);
    g.rcond = fine.rcond();
    if (p2 == p1) {
        g.values = g.fine;
        return g;
    }
    const NystromResolvent coarse(k, alpha, 20 * p2);
    const MatrixXcd c = coarse.evaluate(xs, ys);
    g.values = extrapolate(g.fine, c, p1, p2);
    g.error_estimate = (g.values - g.fine).cwiseAbs().maxCoeff();
    return g;
}

IdentityResiduals identity_residuals(const RationalFunction& s1, const RationalFunction& s2, double alpha, int n) {
    const ExpSum k1 = convolution_kernel(s1), k2 = convolution_kernel(s2), k12 = convolution_kernel(s1 * s2);
    const cplx c1 = s1.at_infinity(), c2 = s2.at_infinity();

    double margin = 1.0;
    for (const auto* r : {&s1, &s2})
        for (const auto& w : r->poles()) margin = std::min(margin, std::abs(w.z.imag()));
    const double len = 40.0 / margin;

    const auto grid = gauss_panels(0.0, alpha, panel_count(n));
    const auto& x = grid.nodes;
    const auto& w = grid.weights;
    // smooth integrands only: half-line for Hankel products, (alpha, alpha + len) for tails
    const auto half = gauss_panels(0.0, len, int(std::ceil(len / 2.0)));
    const auto tail = gauss_panels(alpha, alpha + len, int(std::ceil(len / 2.0)));
    const Eigen::Index m = Eigen::Index(x.size());

    auto weighted = [](const MatrixXcd& a, const std::vector<double>& wts) {
        Eigen::VectorXd v(Eigen::Index(wts.size()));
        for (size_t i = 0; i < wts.size(); ++i) v(Eigen::Index(i)) = wts[i];
        return MatrixXcd(a * v.asDiagonal());
    };

    std::vector<double> neg_x(x.size()), neg_refl(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        neg_x[i] = -x[i];
        neg_refl[i] = -(alpha - x[i]);
    }
    std::vector<double> neg_s(half.nodes.size()), neg_t(tail.nodes.size());
    for (size_t i = 0; i < half.nodes.size(); ++i) neg_s[i] = -half.nodes[i];
    for (size_t i = 0; i < tail.nodes.size(); ++i) neg_t[i] = -tail.nodes[i];

    // k(a - b) with a from xs and b from ys
    auto km = [](const ExpSum& k, const std::vector<double>& a, const std::vector<double>& b) {
        return kernel_matrix(k, a, b);
    };

    const MatrixXcd K1 = km(k1, x, x), K2 = km(k2, x, x), K12 = km(k12, x, x);
    MatrixXcd prod = c1 * K2 + c2 * K1 + weighted(K1, w) * K2 - K12;
    // P H(s1) H(s2~) P : int_0^inf k1(x + s) k2(-s - y) ds
    prod += weighted(km(k1, x, neg_s), half.weights) * km(k2, neg_s, x);
    // Q H(s1~) H(s2) Q : int_0^inf k1(-(a - x) - s) k2(s + (a - y)) ds
    prod += weighted(km(k1, neg_refl, half.nodes), half.weights) * km(k2, half.nodes, neg_refl);

    // H(s1 s2) - W(s1) H(s2) - H(s1) W(s2~) on (0, alpha)^2
    MatrixXcd hank(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            const double u = x[i] + x[j];
            hank(i, j) = k12(u) - c1 * k2(u) - c2 * k1(u);
        }
    // int_0^inf k1(x - s) k2(s + y) ds, split at alpha
    hank -= weighted(km(k1, x, x), w) * km(k2, x, neg_x);
    hank -= weighted(km(k1, x, tail.nodes), tail.weights) * km(k2, tail.nodes, neg_x);
    // int_0^inf k1(x + s) k2(y - s) ds, split at alpha
    hank -= weighted(km(k1, x, neg_x), w) * km(k2, x, x).transpose();
    hank -= weighted(km(k1, x, neg_t), tail.weights) * km(k2, x, tail.nodes).transpose();

    Eigen::VectorXd sw(m);
    for (Eigen::Index i = 0; i < m; ++i) sw(i) = std::sqrt(w[i]);
    IdentityResiduals r;
    r.product_rule = spectral_norm(sw.asDiagonal() * prod * sw.asDiagonal());
    r.hankel_rule = spectral_norm(sw.asDiagonal() * hank * sw.asDiagonal());
    return r;
}

}  // namespace twh

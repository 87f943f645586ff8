#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "twh/error.hpp"
#include "twh/oracle.hpp"

using namespace twh;

namespace {

const cplx I(0.0, 1.0);

RationalFunction cauchy_tau() { return RationalFunction({}, {Root{I}, Root{-I}}, 1.0); }

}  // namespace

TEST_CASE("panel rule") {
    const auto d = discretize(ExpSum{}, 3.0, 100);
    CHECK(d.nodes.size() == 100);
    const double total = std::accumulate(d.weights.begin(), d.weights.end(), 0.0);
    CHECK(std::abs(total - 3.0) < 1e-13);
    for (double x : d.nodes) {
        CHECK(x > 0.0);
        CHECK(x < 3.0);
    }
    CHECK((d.matrix - Eigen::MatrixXcd::Identity(100, 100)).norm() == 0.0);
    CHECK(discretize(ExpSum{}, 1.0, 101).nodes.size() == 120);
    CHECK_THROWS_AS(discretize(ExpSum{}, 0.0, 100), InputError);
    CHECK_THROWS_AS(discretize(ExpSum{}, 1.0, 5), InputError);
}

TEST_CASE("aligned node counts") {
    for (int m : {8, 12}) {
        for (int n : {100, 480, 641}) {
            const int a = aligned_node_count(n, m);
            CHECK(a >= n);
            CHECK(a % 20 == 0);
            CHECK((a / 20) % (2 * m) == 0);
        }
    }
}

TEST_CASE("convolution kernels") {
    const auto sigma0 = SingularSymbol::singular(0.0, cauchy_tau());
    const auto two = SingularSymbol::singular(1.0, cauchy_tau());
    const auto k0 = convolution_kernel(sigma0);
    const auto k1 = convolution_kernel(two);
    for (double x : {-2.0, -0.3, 0.4, 3.0}) {
        CHECK(std::abs(k0(x) + 0.5 * std::exp(-std::abs(x))) < 1e-15);
        CHECK(std::abs(k1(x) + std::exp(-std::abs(x))) < 1e-15);
    }
    CHECK(std::abs(k0.fourier(0.7) - (sigma0.sigma()(0.7) - 1.0)) < 1e-15);
}

TEST_CASE("determinant refinement") {
    const auto s = SingularSymbol::singular(0.0, cauchy_tau());
    const double exact = std::exp(-5.0) * 3.5;
    double prev = INFINITY;
    for (int n : {100, 200, 400}) {
        const auto d = nystrom_determinant(s, 5.0, n);
        const double err = std::abs(d.value - exact);
        CHECK(err < prev);
        CHECK(std::abs(d.fine - exact) < std::abs(d.coarse - exact));
        CHECK(d.error_estimate >= err);
        prev = err;
    }
    CHECK(prev / exact < 5e-7);
}

TEST_CASE("raw determinant of a trivial kernel") {
    CHECK(std::abs(nystrom_determinant_raw(ExpSum{}, 2.0, 40) - 1.0) < 1e-15);
}

TEST_CASE("resolvent of an even kernel is symmetric") {
    const auto s = SingularSymbol::singular(1.0, cauchy_tau());
    const NystromResolvent r(convolution_kernel(s), 6.0, 240);
    for (auto [x, y] : {std::pair{0.3, 4.1}, {1.0, 5.5}, {2.2, 2.9}}) CHECK(std::abs(r(x, y) - r(y, x)) < 1e-9);
    // persymmetric too: r(x, y) = r(a - y, a - x)
    CHECK(std::abs(r(0.3, 4.1) - r(6.0 - 4.1, 6.0 - 0.3)) < 1e-9);
}

TEST_CASE("resolvent samples invert the discretized operator") {
    const auto s = SingularSymbol::singular(0.5, RationalFunction({Root{cplx(0.3, 0.5)}},
                                                                  {Root{I}, Root{-2.0 * I}, Root{cplx(-0.4, 1.5)}}, 1.0));
    const auto ns = normalized(s);
    const NystromResolvent r(convolution_kernel(ns), 4.0, 120);
    const auto& d = r.discretization();
    const Eigen::Index n = Eigen::Index(d.nodes.size());
    Eigen::VectorXd sw(n);
    for (Eigen::Index i = 0; i < n; ++i) sw(i) = std::sqrt(d.weights[size_t(i)]);
    const Eigen::MatrixXcd rs = sw.asDiagonal() * r.node_samples() * sw.asDiagonal();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    CHECK((d.matrix * (id + rs) - id).norm() < 1e-8);
    // interpolation reproduces the node values
    CHECK(std::abs(r(d.nodes[3], d.nodes[17]) - r.node_samples()(3, 17)) < 1e-10);
    CHECK(r.rcond() > 0.0);
}

TEST_CASE("near-singular truncations are rejected") {
    // k = -1 on (0, 1): I + K annihilates constants
    const ExpSum minus_one({ExpTerm{Support::whole, -1.0, 0, 0.0}});
    CHECK_THROWS_WITH_AS(NystromResolvent(minus_one, 1.0, 40), "near-singular truncation", NumericalError);
}

TEST_CASE("grid resolvent") {
    const auto s = SingularSymbol::singular(0.0, cauchy_tau());
    std::vector<double> g;
    for (int i = 1; i < 8; ++i) g.push_back(6.0 * i / 8);
    const auto r = nystrom_resolvent(s, 6.0, aligned_node_count(200, 8), g, g);
    CHECK(r.values.rows() == 7);
    CHECK(r.error_estimate < 1e-3);
    CHECK((r.values - r.values.transpose()).norm() < 1e-9);
    // the extrapolated grid is closer to a finer solve than the estimate claims
    const auto fine = nystrom_resolvent(s, 6.0, aligned_node_count(800, 8), g, g);
    CHECK((r.values - fine.values).cwiseAbs().maxCoeff() < r.error_estimate);
    CHECK(fine.error_estimate < r.error_estimate / 8);
}

TEST_CASE("identity residuals shrink under refinement") {
    const RationalFunction reg({Root{I * std::sqrt(2.0)}, Root{-I * std::sqrt(2.0)}}, {Root{I}, Root{-I}}, 1.0);
    const RationalFunction dec2({}, {Root{2.0 * I + 0.5}, Root{-1.5 * I}}, 1.0);
    const RationalFunction asym({Root{cplx(0.3, 0.8)}, Root{cplx(-0.5, -1.2)}}, {Root{I}, Root{cplx(0.2, -1.5)}}, 1.0);
    IdentityResiduals prev{INFINITY, INFINITY};
    for (int n : {100, 200, 400}) {
        const auto a = identity_residuals(reg, reg, 4.0, n);
        const auto b = identity_residuals(cauchy_tau(), dec2, 4.0, n);
        const auto c = identity_residuals(asym, reg, 4.0, n);
        const double pr = std::max(a.product_rule, c.product_rule);
        const double hr = std::max({a.hankel_rule, b.hankel_rule, c.hankel_rule});
        CHECK(pr < prev.product_rule);
        CHECK(hr < prev.hankel_rule);
        prev = {pr, hr};
    }
    CHECK(prev.product_rule < 1e-3);
    CHECK(prev.hankel_rule < 1e-3);
    const auto one = identity_residuals(RationalFunction::constant(1.0), RationalFunction::constant(1.0), 4.0, 100);
    CHECK(one.product_rule == 0.0);
    CHECK(one.hankel_rule == 0.0);
}

TEST_CASE("refinement differences shrink on the packaged symbols") {
    for (const auto& name : preset_names()) {
        const auto s = preset_symbol(name);
        const cplx d1 = nystrom_determinant(s, 5.0, 100).value;
        const cplx d2 = nystrom_determinant(s, 5.0, 200).value;
        const cplx d3 = nystrom_determinant(s, 5.0, 400).value;
        CHECK(std::abs(d3 - d2) < std::abs(d2 - d1));
    }
}

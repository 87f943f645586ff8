#pragma once

#include <complex>
#include <vector>

namespace twh {

using cplx = std::complex<double>;

// Which side of the real axis a real root is considered to lie on.
// Ignored for points with nonzero imaginary part.
enum class Side { none, above, below };

struct Root {
    cplx z;
    Side side = Side::none;

    bool on_axis() const { return z.imag() == 0.0; }
    bool operator==(const Root& o) const { return z == o.z && (side == o.side || !on_axis()); }
};

// +1 for the upper half-plane, -1 for the lower. Throws InputError
// ("boundary side required") for a real root without a side tag.
int half_plane(const Root& r);

Root above(double x);
Root below(double x);

// scale * prod(xi - zeros) / prod(xi - poles), with deg num <= deg den.
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(std::vector<Root> zeros, std::vector<Root> poles, cplx scale);

    static RationalFunction constant(cplx c);

    const std::vector<Root>& zeros() const { return zeros_; }
    const std::vector<Root>& poles() const { return poles_; }
    cplx scale() const { return scale_; }

    cplx operator()(cplx xi) const;
    cplx at_infinity() const;
    cplx log_derivative(cplx xi) const;
    cplx derivative(cplx xi) const;

    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator*(cplx s) const;
    RationalFunction inverse() const;
    // factor * (xi - z) * this
    RationalFunction with_zero(const Root& z, cplx factor = 1.0) const;
    // xi -> -xi; side tags flip with the points.
    RationalFunction reflected() const;

private:
    void cancel_common();

    std::vector<Root> zeros_;
    std::vector<Root> poles_;
    cplx scale_ = 1.0;
};

struct PoleTerm {
    Root pole;
    int order = 1;
    cplx coeff;
};

// constant + sum coeff / (xi - pole)^order
struct PartialFractions {
    cplx constant = 0.0;
    std::vector<PoleTerm> terms;

    cplx operator()(cplx xi) const;
    PartialFractions operator+(const PartialFractions& o) const;
    PartialFractions operator*(cplx s) const;
    PartialFractions reflected() const;
};

PartialFractions partial_fractions(const RationalFunction& r);

struct HalfPlaneSplit {
    PartialFractions plus;   // poles in the lower half-plane
    PartialFractions minus;  // poles in the upper half-plane
    cplx constant = 0.0;
};

HalfPlaneSplit split_half_plane(const PartialFractions& r);
HalfPlaneSplit split_half_plane(const RationalFunction& r);

enum class Support { positive, negative, whole };

// coeff * x^power * exp(rate * x) on the given support.
struct ExpTerm {
    Support support = Support::positive;
    cplx coeff;
    int power = 0;
    cplx rate;
};

class ExpSum {
public:
    ExpSum() = default;
    explicit ExpSum(std::vector<ExpTerm> terms);

    const std::vector<ExpTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    // At x = 0 the half-line terms contribute half their limit value.
    cplx operator()(double x) const;
    cplx fourier(double xi) const;

    ExpSum operator+(const ExpSum& o) const;
    ExpSum operator*(cplx s) const;

private:
    std::vector<ExpTerm> terms_;
};

ExpSum inverse_fourier(const PartialFractions& r);
ExpSum inverse_fourier(const RationalFunction& r);

// Regularized integral of f*g over (0, inf); negative-support terms vanish there.
cplx halfline_integral(const ExpSum& f, const ExpSum& g);

enum class Region { whole, lower, upper };

// coeff * x^px * y^py * exp(rate_x x + rate_y y + offset), restricted to region.
struct KernelTerm {
    Region region = Region::whole;
    cplx coeff;
    int px = 0;
    int py = 0;
    cplx rate_x;
    cplx rate_y;
    cplx offset;
};

class Kernel2D {
public:
    Kernel2D() = default;
    Kernel2D(cplx identity, std::vector<KernelTerm> terms, double alpha = 0.0);

    cplx identity_coeff() const { return identity_; }
    const std::vector<KernelTerm>& terms() const { return terms_; }
    double alpha() const { return alpha_; }
    Kernel2D with_alpha(double alpha) const;

    // On the diagonal, half-region terms contribute half.
    cplx operator()(double x, double y) const;

    Kernel2D operator+(const Kernel2D& o) const;
    Kernel2D operator-(const Kernel2D& o) const;
    Kernel2D operator*(cplx s) const;
    // Kernel of Q K Q, with (Q f)(x) = f(alpha - x).
    Kernel2D flipped() const;
    Kernel2D transposed() const;

private:
    cplx identity_ = 0.0;
    std::vector<KernelTerm> terms_;
    double alpha_ = 0.0;
};

// Either identity*I + convolution by profile(x - y), or Hankel with profile(x + y).
struct KernelFactor {
    enum class Kind { convolution, hankel };
    Kind kind = Kind::convolution;
    cplx identity = 0.0;
    ExpSum profile;

    static KernelFactor convolution(cplx identity, ExpSum k);
    static KernelFactor hankel(ExpSum h);
    Kernel2D kernel() const;
};

// Kernel of the product of two half-line operators (integration over s in (0, inf)).
Kernel2D compose_kernels(const Kernel2D& left, const Kernel2D& right);
Kernel2D compose_kernels(const KernelFactor& left, const KernelFactor& right);

// (identity*I + k*) f on x > 0, with f supported on the positive half-line.
ExpSum apply_convolution(cplx identity, const ExpSum& k, const ExpSum& f);
// x -> int_0^inf h(x + s) f(s) ds.
ExpSum apply_hankel(const ExpSum& h, const ExpSum& f);

}  // namespace twh

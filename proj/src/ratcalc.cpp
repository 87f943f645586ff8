#include "twh/ratcalc.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "twh/error.hpp"

namespace twh {

namespace {

constexpr double kPoleSeparation = 1e-10;
constexpr double kZeroRate = 1e-11;
constexpr double kGrowthTol = 1e-12;

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

cplx ipow(cplx z, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

Side flip(Side s) {
    switch (s) {
        case Side::above: return Side::below;
        case Side::below: return Side::above;
        default: return Side::none;
    }
}

Root negated(const Root& r) { return Root{-r.z, flip(r.side)}; }

bool in_support(Support s, double x) {
    switch (s) {
        case Support::positive: return x > 0.0;
        case Support::negative: return x < 0.0;
        default: return true;
    }
}

// Three-variable monomial c * x^px y^py s^ps * exp(rx x + ry y + rs s + k).
struct Mono {
    cplx c;
    int px = 0, py = 0, ps = 0;
    cplx rx, ry, rs, k;
};

enum class Bound { zero, x, y, inf };

// Adds sign * F(b) where F is the s-antiderivative of m.
void antiderivative_at(const Mono& m, Bound b, double sign, std::vector<Mono>& out) {
    const cplx nu = m.rs;
    const int c = m.ps;
    const bool flat = std::abs(nu) < kZeroRate;
    if (b == Bound::inf) {
        if (flat || nu.real() > kGrowthTol) throw InputError("divergent pairing");
        return;
    }
    if (flat) {
        if (b == Bound::zero) return;
        Mono r{m.c * sign / double(c + 1), m.px, m.py, 0, m.rx, m.ry, 0.0, m.k};
        (b == Bound::x ? r.px : r.py) += c + 1;
        out.push_back(r);
        return;
    }
    if (b == Bound::zero) {
        const double s = (c % 2 == 0) ? 1.0 : -1.0;
        out.push_back(Mono{m.c * sign * s * factorial(c) / ipow(nu, c + 1), m.px, m.py, 0, m.rx, m.ry, 0.0, m.k});
        return;
    }
    for (int j = 0; j <= c; ++j) {
        const double s = (j % 2 == 0) ? 1.0 : -1.0;
        Mono r{m.c * sign * s * (factorial(c) / factorial(c - j)) / ipow(nu, j + 1), m.px, m.py, 0, m.rx, m.ry, 0.0, m.k};
        if (b == Bound::x) {
            r.px += c - j;
            r.rx += nu;
        } else {
            r.py += c - j;
            r.ry += nu;
        }
        out.push_back(r);
    }
}

std::vector<Mono> integrate_s(const Mono& m, Bound lo, Bound hi) {
    std::vector<Mono> out;
    antiderivative_at(m, hi, 1.0, out);
    antiderivative_at(m, lo, -1.0, out);
    return out;
}

int rank(Bound b, Region r) {
    switch (b) {
        case Bound::zero: return 0;
        case Bound::inf: return 3;
        case Bound::x: return r == Region::lower ? 2 : 1;
        default: return r == Region::lower ? 1 : 2;
    }
}

ExpSum monos_to_expsum(const std::vector<Mono>& ms) {
    std::vector<ExpTerm> ts;
    ts.reserve(ms.size());
    for (const auto& m : ms) ts.push_back({Support::positive, m.c * std::exp(m.k), m.px, m.rx});
    return ExpSum(std::move(ts));
}

auto term_key(const KernelTerm& t) {
    return std::make_tuple(int(t.region), t.px, t.py, t.rate_x.real(), t.rate_x.imag(), t.rate_y.real(),
                           t.rate_y.imag(), t.offset.real(), t.offset.imag());
}

std::vector<KernelTerm> simplify(std::vector<KernelTerm> ts) {
    std::sort(ts.begin(), ts.end(), [](const KernelTerm& a, const KernelTerm& b) { return term_key(a) < term_key(b); });
    std::vector<KernelTerm> out;
    for (const auto& t : ts) {
        if (!out.empty() && term_key(out.back()) == term_key(t))
            out.back().coeff += t.coeff;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const KernelTerm& t) { return t.coeff == 0.0; });
    return out;
}

}  // namespace

int half_plane(const Root& r) {
    if (r.z.imag() > 0.0) return 1;
    if (r.z.imag() < 0.0) return -1;
    if (r.side == Side::above) return 1;
    if (r.side == Side::below) return -1;
    throw InputError("boundary side required");
}

Root above(double x) { return Root{cplx(x, 0.0), Side::above}; }
Root below(double x) { return Root{cplx(x, 0.0), Side::below}; }

// ---------------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(std::vector<Root> zeros, std::vector<Root> poles, cplx scale)
    : zeros_(std::move(zeros)), poles_(std::move(poles)), scale_(scale) {
    if (scale_ == 0.0) {
        zeros_.clear();
        poles_.clear();
        return;
    }
    cancel_common();
    if (zeros_.size() > poles_.size()) throw InputError("numerator degree exceeds denominator degree");
}

RationalFunction RationalFunction::constant(cplx c) { return RationalFunction({}, {}, c); }

void RationalFunction::cancel_common() {
    for (auto z = zeros_.begin(); z != zeros_.end();) {
        auto w = std::find(poles_.begin(), poles_.end(), *z);
        if (w != poles_.end()) {
            poles_.erase(w);
            z = zeros_.erase(z);
        } else {
            ++z;
        }
    }
}

cplx RationalFunction::operator()(cplx xi) const {
    cplx v = scale_;
    for (const auto& z : zeros_) v *= xi - z.z;
    for (const auto& w : poles_) v /= xi - w.z;
    return v;
}

cplx RationalFunction::at_infinity() const { return zeros_.size() == poles_.size() ? scale_ : cplx(0.0); }

cplx RationalFunction::log_derivative(cplx xi) const {
    cplx s = 0.0;
    for (const auto& z : zeros_) s += 1.0 / (xi - z.z);
    for (const auto& w : poles_) s -= 1.0 / (xi - w.z);
    return s;
}

cplx RationalFunction::derivative(cplx xi) const {
    // Product rule on the numerator so that zeros at xi are handled.
    cplx num = 1.0, dnum = 0.0;
    for (const auto& z : zeros_) {
        dnum = dnum * (xi - z.z) + num;
        num *= xi - z.z;
    }
    cplx den = 1.0, dden = 0.0;
    for (const auto& w : poles_) {
        dden = dden * (xi - w.z) + den;
        den *= xi - w.z;
    }
    return scale_ * (dnum * den - num * dden) / (den * den);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    auto zs = zeros_;
    zs.insert(zs.end(), o.zeros_.begin(), o.zeros_.end());
    auto ps = poles_;
    ps.insert(ps.end(), o.poles_.begin(), o.poles_.end());
    return RationalFunction(std::move(zs), std::move(ps), scale_ * o.scale_);
}

RationalFunction RationalFunction::operator*(cplx s) const { return RationalFunction(zeros_, poles_, scale_ * s); }

RationalFunction RationalFunction::inverse() const {
    if (scale_ == 0.0) throw InputError("inverse of zero function");
    return RationalFunction(poles_, zeros_, 1.0 / scale_);
}

RationalFunction RationalFunction::with_zero(const Root& z, cplx factor) const {
    auto zs = zeros_;
    zs.push_back(z);
    return RationalFunction(std::move(zs), poles_, scale_ * factor);
}

RationalFunction RationalFunction::reflected() const {
    std::vector<Root> zs, ps;
    for (const auto& z : zeros_) zs.push_back(negated(z));
    for (const auto& w : poles_) ps.push_back(negated(w));
    const double sign = ((zeros_.size() + poles_.size()) % 2 == 0) ? 1.0 : -1.0;
    return RationalFunction(std::move(zs), std::move(ps), scale_ * sign);
}

// ---------------------------------------------------------------- PartialFractions

cplx PartialFractions::operator()(cplx xi) const {
    cplx v = constant;
    for (const auto& t : terms) v += t.coeff / ipow(xi - t.pole.z, t.order);
    return v;
}

PartialFractions PartialFractions::operator+(const PartialFractions& o) const {
    PartialFractions r = *this;
    r.constant += o.constant;
    for (const auto& t : o.terms) {
        auto it = std::find_if(r.terms.begin(), r.terms.end(),
                               [&](const PoleTerm& u) { return u.pole == t.pole && u.order == t.order; });
        if (it != r.terms.end())
            it->coeff += t.coeff;
        else
            r.terms.push_back(t);
    }
    return r;
}

PartialFractions PartialFractions::operator*(cplx s) const {
    PartialFractions r = *this;
    r.constant *= s;
    for (auto& t : r.terms) t.coeff *= s;
    return r;
}

PartialFractions PartialFractions::reflected() const {
    PartialFractions r;
    r.constant = constant;
    for (const auto& t : terms) r.terms.push_back({negated(t.pole), t.order, t.coeff * ((t.order % 2 == 0) ? 1.0 : -1.0)});
    return r;
}

PartialFractions partial_fractions(const RationalFunction& r) {
    PartialFractions out;
    out.constant = r.at_infinity();
    if (r.scale() == 0.0) return out;

    struct Group {
        Root pole;
        int mult;
    };
    std::vector<Group> groups;
    for (const auto& w : r.poles()) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.pole == w; });
        if (it != groups.end()) {
            ++it->mult;
            continue;
        }
        for (const auto& g : groups)
            if (std::abs(g.pole.z - w.z) < kPoleSeparation) throw InputError("poles too close");
        groups.push_back({w, 1});
    }

    for (const auto& g : groups) {
        if (g.mult > 2) throw InputError("pole multiplicity above 2 unsupported");
        const cplx a = g.pole.z;
        // g(xi) = r(xi) (xi - a)^mult, evaluated at a
        cplx ga = r.scale();
        cplx dlog = 0.0;
        for (const auto& z : r.zeros()) {
            ga *= a - z.z;
            dlog += 1.0 / (a - z.z);
        }
        for (const auto& w : r.poles()) {
            if (w == g.pole) continue;
            ga /= a - w.z;
            dlog -= 1.0 / (a - w.z);
        }
        out.terms.push_back({g.pole, g.mult, ga});
        if (g.mult == 2) out.terms.push_back({g.pole, 1, ga * dlog});
    }
    return out;
}

HalfPlaneSplit split_half_plane(const PartialFractions& r) {
    HalfPlaneSplit s;
    s.constant = r.constant;
    for (const auto& t : r.terms) (half_plane(t.pole) < 0 ? s.plus : s.minus).terms.push_back(t);
    return s;
}

HalfPlaneSplit split_half_plane(const RationalFunction& r) { return split_half_plane(partial_fractions(r)); }

// ---------------------------------------------------------------- ExpSum

ExpSum::ExpSum(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (t.power < 0) throw InputError("negative power in exponential sum");
        const double re = t.rate.real();
        const double tol = 1e-9 * std::max(1.0, std::abs(t.rate));
        if ((t.support == Support::positive && re > tol) || (t.support == Support::negative && re < -tol))
            throw InputError("exponentially growing term");
    }
    std::erase_if(terms_, [](const ExpTerm& t) { return t.coeff == 0.0; });
}

cplx ExpSum::operator()(double x) const {
    cplx v = 0.0;
    for (const auto& t : terms_) {
        if (x == 0.0) {
            if (t.power > 0) continue;
            v += t.support == Support::whole ? t.coeff : 0.5 * t.coeff;
        } else if (in_support(t.support, x)) {
            v += t.coeff * ipow(x, t.power) * std::exp(t.rate * x);
        }
    }
    return v;
}

cplx ExpSum::fourier(double xi) const {
    const cplx ixi(0.0, xi);
    cplx v = 0.0;
    for (const auto& t : terms_) {
        const double mf = factorial(t.power);
        switch (t.support) {
            case Support::positive: v += t.coeff * mf / ipow(-t.rate - ixi, t.power + 1); break;
            case Support::negative:
                v += t.coeff * ((t.power % 2 == 0) ? 1.0 : -1.0) * mf / ipow(t.rate + ixi, t.power + 1);
                break;
            default: throw InputError("whole-line term has no Fourier transform");
        }
    }
    return v;
}

ExpSum ExpSum::operator+(const ExpSum& o) const {
    auto ts = terms_;
    ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
    return ExpSum(std::move(ts));
}

ExpSum ExpSum::operator*(cplx s) const {
    auto ts = terms_;
    for (auto& t : ts) t.coeff *= s;
    return ExpSum(std::move(ts));
}

ExpSum inverse_fourier(const PartialFractions& r) {
    double size = 0.0;
    for (const auto& t : r.terms) size += std::abs(t.coeff);
    if (std::abs(r.constant) > 1e-13 * std::max(1.0, size)) throw InputError("delta part present");
    std::vector<ExpTerm> ts;
    for (const auto& t : r.terms) {
        const cplx a = t.pole.z;
        const cplx rate = cplx(0.0, -1.0) * a;
        const cplx c = t.coeff * ipow(cplx(0.0, -1.0), t.order) / factorial(t.order - 1);
        if (half_plane(t.pole) < 0)
            ts.push_back({Support::positive, c, t.order - 1, rate});
        else
            ts.push_back({Support::negative, -c, t.order - 1, rate});
    }
    return ExpSum(std::move(ts));
}

ExpSum inverse_fourier(const RationalFunction& r) { return inverse_fourier(partial_fractions(r)); }

cplx halfline_integral(const ExpSum& f, const ExpSum& g) {
    cplx v = 0.0;
    for (const auto& a : f.terms()) {
        if (a.support == Support::negative) continue;
        for (const auto& b : g.terms()) {
            if (b.support == Support::negative) continue;
            const cplx mu = a.rate + b.rate;
            const int m = a.power + b.power;
            if (std::abs(mu) < kZeroRate || mu.real() > kGrowthTol) throw InputError("divergent pairing");
            v += a.coeff * b.coeff * factorial(m) * ipow(-1.0 / mu, m + 1);
        }
    }
    return v;
}

// ---------------------------------------------------------------- Kernel2D

Kernel2D::Kernel2D(cplx identity, std::vector<KernelTerm> terms, double alpha)
    : identity_(identity), terms_(simplify(std::move(terms))), alpha_(alpha) {}

Kernel2D Kernel2D::with_alpha(double alpha) const {
    Kernel2D k = *this;
    k.alpha_ = alpha;
    return k;
}

cplx Kernel2D::operator()(double x, double y) const {
    cplx v = 0.0;
    for (const auto& t : terms_) {
        double w = 1.0;
        if (t.region == Region::lower)
            w = x > y ? 1.0 : (x == y ? 0.5 : 0.0);
        else if (t.region == Region::upper)
            w = x < y ? 1.0 : (x == y ? 0.5 : 0.0);
        if (w == 0.0) continue;
        v += w * t.coeff * ipow(x, t.px) * ipow(y, t.py) * std::exp(t.rate_x * x + t.rate_y * y + t.offset);
    }
    return v;
}

Kernel2D Kernel2D::operator+(const Kernel2D& o) const {
    auto ts = terms_;
    ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
    return Kernel2D(identity_ + o.identity_, std::move(ts), std::max(alpha_, o.alpha_));
}

Kernel2D Kernel2D::operator-(const Kernel2D& o) const { return *this + o * -1.0; }

Kernel2D Kernel2D::operator*(cplx s) const {
    auto ts = terms_;
    for (auto& t : ts) t.coeff *= s;
    return Kernel2D(identity_ * s, std::move(ts), alpha_);
}

Kernel2D Kernel2D::flipped() const {
    const double a = alpha_;
    std::vector<KernelTerm> ts;
    for (const auto& t : terms_) {
        const Region reg = t.region == Region::lower ? Region::upper
                           : t.region == Region::upper ? Region::lower
                                                       : Region::whole;
        const cplx off = t.offset + (t.rate_x + t.rate_y) * a;
        for (int i = 0; i <= t.px; ++i) {
            const double cx = binomial(t.px, i) * ipow(a, t.px - i) * ((i % 2 == 0) ? 1.0 : -1.0);
            for (int j = 0; j <= t.py; ++j) {
                const double cy = binomial(t.py, j) * ipow(a, t.py - j) * ((j % 2 == 0) ? 1.0 : -1.0);
                ts.push_back({reg, t.coeff * cx * cy, i, j, -t.rate_x, -t.rate_y, off});
            }
        }
    }
    return Kernel2D(identity_, std::move(ts), alpha_);
}

Kernel2D Kernel2D::transposed() const {
    auto ts = terms_;
    for (auto& t : ts) {
        if (t.region == Region::lower)
            t.region = Region::upper;
        else if (t.region == Region::upper)
            t.region = Region::lower;
        std::swap(t.px, t.py);
        std::swap(t.rate_x, t.rate_y);
    }
    return Kernel2D(identity_, std::move(ts), alpha_);
}

KernelFactor KernelFactor::convolution(cplx identity, ExpSum k) {
    return KernelFactor{Kind::convolution, identity, std::move(k)};
}

KernelFactor KernelFactor::hankel(ExpSum h) { return KernelFactor{Kind::hankel, 0.0, std::move(h)}; }

Kernel2D KernelFactor::kernel() const {
    std::vector<KernelTerm> ts;
    for (const auto& t : profile.terms()) {
        if (kind == Kind::convolution) {
            const Region reg = t.support == Support::positive   ? Region::lower
                               : t.support == Support::negative ? Region::upper
                                                                : Region::whole;
            for (int j = 0; j <= t.power; ++j) {
                const double c = binomial(t.power, j) * (((t.power - j) % 2 == 0) ? 1.0 : -1.0);
                ts.push_back({reg, t.coeff * c, j, t.power - j, t.rate, -t.rate, 0.0});
            }
        } else {
            if (t.support == Support::negative) continue;
            for (int j = 0; j <= t.power; ++j)
                ts.push_back({Region::whole, t.coeff * binomial(t.power, j), j, t.power - j, t.rate, t.rate, 0.0});
        }
    }
    return Kernel2D(kind == Kind::convolution ? identity : cplx(0.0), std::move(ts));
}

Kernel2D compose_kernels(const Kernel2D& left, const Kernel2D& right) {
    std::vector<KernelTerm> out;
    if (left.identity_coeff() != 0.0)
        for (auto t : right.terms()) {
            t.coeff *= left.identity_coeff();
            out.push_back(t);
        }
    if (right.identity_coeff() != 0.0)
        for (auto t : left.terms()) {
            t.coeff *= right.identity_coeff();
            out.push_back(t);
        }

    auto emit = [&out](const std::vector<Mono>& ms, Region reg) {
        for (const auto& m : ms) out.push_back({reg, m.c, m.px, m.py, m.rx, m.ry, m.k});
    };

    for (const auto& l : left.terms()) {
        for (const auto& r : right.terms()) {
            const Mono m{l.coeff * r.coeff, l.px,           r.py, l.py + r.px, l.rate_x, r.rate_y,
                         l.rate_y + r.rate_x, l.offset + r.offset};
            // left lives on (x, s), right on (s, y)
            const bool hi_x = l.region == Region::lower;
            const bool lo_x = l.region == Region::upper;
            const bool lo_y = r.region == Region::lower;
            const bool hi_y = r.region == Region::upper;
            const bool uses_x = hi_x || lo_x;
            const bool uses_y = hi_y || lo_y;
            if (!(uses_x && uses_y)) {
                Bound lo = Bound::zero, hi = Bound::inf;
                if (lo_x) lo = Bound::x;
                if (hi_x) hi = Bound::x;
                if (lo_y) lo = Bound::y;
                if (hi_y) hi = Bound::y;
                emit(integrate_s(m, lo, hi), Region::whole);
                continue;
            }
            for (Region reg : {Region::lower, Region::upper}) {
                Bound lo = Bound::zero, hi = Bound::inf;
                auto raise = [&](Bound b) {
                    if (rank(b, reg) > rank(lo, reg)) lo = b;
                };
                auto drop = [&](Bound b) {
                    if (rank(b, reg) < rank(hi, reg)) hi = b;
                };
                if (lo_x) raise(Bound::x);
                if (lo_y) raise(Bound::y);
                if (hi_x) drop(Bound::x);
                if (hi_y) drop(Bound::y);
                if (rank(lo, reg) >= rank(hi, reg)) continue;
                emit(integrate_s(m, lo, hi), reg);
            }
        }
    }
    return Kernel2D(left.identity_coeff() * right.identity_coeff(), std::move(out),
                    std::max(left.alpha(), right.alpha()));
}

Kernel2D compose_kernels(const KernelFactor& left, const KernelFactor& right) {
    return compose_kernels(left.kernel(), right.kernel());
}

ExpSum apply_convolution(cplx identity, const ExpSum& k, const ExpSum& f) {
    std::vector<Mono> ms;
    for (const auto& b : f.terms()) {
        if (b.support != Support::positive) throw InputError("operand must live on the positive half-line");
        for (const auto& a : k.terms()) {
            const Bound lo = a.support == Support::negative ? Bound::x : Bound::zero;
            const Bound hi = a.support == Support::positive ? Bound::x : Bound::inf;
            for (int j = 0; j <= a.power; ++j) {
                const double c = binomial(a.power, j) * (((a.power - j) % 2 == 0) ? 1.0 : -1.0);
                const Mono m{a.coeff * b.coeff * c, j, 0, a.power - j + b.power, a.rate, 0.0, b.rate - a.rate, 0.0};
                auto r = integrate_s(m, lo, hi);
                ms.insert(ms.end(), r.begin(), r.end());
            }
        }
    }
    return f * identity + monos_to_expsum(ms);
}

ExpSum apply_hankel(const ExpSum& h, const ExpSum& f) {
    std::vector<Mono> ms;
    for (const auto& b : f.terms()) {
        if (b.support != Support::positive) throw InputError("operand must live on the positive half-line");
        for (const auto& a : h.terms()) {
            if (a.support == Support::negative) continue;
            for (int j = 0; j <= a.power; ++j) {
                const Mono m{a.coeff * b.coeff * binomial(a.power, j), j, 0, a.power - j + b.power, a.rate, 0.0,
                             a.rate + b.rate, 0.0};
                auto r = integrate_s(m, Bound::zero, Bound::inf);
                ms.insert(ms.end(), r.begin(), r.end());
            }
        }
    }
    return monos_to_expsum(ms);
}

}  // namespace twh

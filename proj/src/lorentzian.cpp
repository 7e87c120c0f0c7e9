// lorentzian.cpp: Closed forms for the exponential correlation function

#include "qdecay/lorentzian.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qdecay::lorentzian {

namespace {

// sinh(x)/x, analytic at x = 0.
cplx sinhc(cplx x)
{
    if (std::abs(x) < 1e-4) {
        const cplx x2 = x * x;
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
    }
    return std::sinh(x) / x;
}

// e^{-decay t} [cosh(l t d/2) + sinh(l t d/2)/d], the shape shared by G(t) and k1(t).
cplx damped_hyperbolic(double lambda, double decay, cplx d, double t)
{
    const cplx arg = 0.5 * lambda * t * d;
    return std::exp(-decay * t) * (std::cosh(arg) + 0.5 * lambda * t * sinhc(arg));
}

}  // namespace

double amplitude(const LorentzianParams& p, double t)
{
    return damped_hyperbolic(p.lambda, 0.5 * p.lambda, p.delta(), t).real();
}

double amplitude_derivative(const LorentzianParams& p, double t)
{
    const cplx d = p.delta();
    const cplx arg = 0.5 * p.lambda * t * d;
    const double half_l = 0.5 * p.lambda;
    // d/dt [cosh + sinh/d] = (l/2) [d sinh + cosh]
    const cplx bracket_dot = half_l * (d * std::sinh(arg) + std::cosh(arg));
    const cplx value = std::exp(-half_l * t) * bracket_dot - half_l * damped_hyperbolic(p.lambda, half_l, d, t);
    return value.real();
}

double decay_rate(const LorentzianParams& p, double t)
{
    const cplx arg = 0.5 * p.lambda * t * p.delta();
    // Numerator and denominator of 2 g0 sinh / (d cosh + sinh), both divided by d.
    const cplx sinh_over_d = 0.5 * p.lambda * t * sinhc(arg);
    return (2.0 * p.gamma0 * sinh_over_d / (std::cosh(arg) + sinh_over_d)).real();
}

double asymptotic_decay_rate(const LorentzianParams& p)
{
    if (2.0 * p.gamma0 >= p.lambda) return std::numeric_limits<double>::quiet_NaN();
    return 2.0 * p.gamma0 / (1.0 + p.delta().real());
}

double first_zero_time(const LorentzianParams& p)
{
    if (2.0 * p.gamma0 <= p.lambda) return std::numeric_limits<double>::quiet_NaN();
    const double dh = p.delta_hat().real();
    return 2.0 / (p.lambda * dh) * (std::numbers::pi - std::atan(dh));
}

double memory_kernel_k1(const LorentzianParams& p, double t)
{
    return p.gamma0 * p.lambda * damped_hyperbolic(p.lambda, 1.5 * p.lambda, p.delta_prime(), t).real();
}

double decay_rate_order2(const LorentzianParams& p, double t)
{
    return p.gamma0 * (1.0 - std::exp(-p.lambda * t));
}

double memory_kernel_k1_order4(const LorentzianParams& p, double t)
{
    const double lt = p.lambda * t;
    return p.gamma0 * p.gamma0 * (std::exp(-lt) * (1.0 - lt) - std::exp(-2.0 * lt));
}

}  // namespace qdecay::lorentzian

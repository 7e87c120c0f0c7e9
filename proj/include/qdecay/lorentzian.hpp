// lorentzian.hpp: Closed-form results for the resonant Lorentzian reservoir
//
// These serve as analytic references for the numerical engines. Complex arithmetic is
// used throughout so that the strong-coupling branch (imaginary delta) needs no special casing.

#pragma once

#include "qdecay/reservoir.hpp"

namespace qdecay::lorentzian {

/// G(t) = e^{-lt/2} [cosh(lt d/2) + sinh(lt d/2)/d], d = sqrt(1 - 2 g0/l).
double amplitude(const LorentzianParams& p, double t);

/// dG/dt of the closed form.
double amplitude_derivative(const LorentzianParams& p, double t);

/// Exact TCL decay rate; the shift vanishes because G is real.
double decay_rate(const LorentzianParams& p, double t);

/// t -> infinity limit of decay_rate for weak coupling, 2 g0 / (1 + d).
double asymptotic_decay_rate(const LorentzianParams& p);

/// First zero of G for gamma0 > lambda/2; NaN in the weak-coupling regime.
double first_zero_time(const LorentzianParams& p);

/// Exact memory-kernel coefficient k1(t).
double memory_kernel_k1(const LorentzianParams& p, double t);

/// Second-order TCL rate gamma0 (1 - e^{-lt}).
double decay_rate_order2(const LorentzianParams& p, double t);

/// Fourth-order memory-kernel contribution g0^2 [e^{-lt}(1 - lt) - e^{-2lt}].
double memory_kernel_k1_order4(const LorentzianParams& p, double t);

}  // namespace qdecay::lorentzian

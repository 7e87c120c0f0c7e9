// volterra.hpp: Convolution-type Volterra solvers on uniform grids
//
// Forward problem:  x'(t) = -int_0^t k(t-s) x(s) ds,  x(0) = x0.
// Inverse problem:  given z, z' with z(0) = 1, recover k from the same relation.
//
// Both use trapezoidal product integration. At step n the memory sum is
//   h [ k_n x_0 / 2 + sum_{j=1}^{n-1} k_{n-j} x_j + k_0 x_n / 2 ],
// and x_n = x_{n-1} + h (x'_{n-1} + x'_n) / 2. The diagonal term is linear in the
// unknown and is solved in closed form, so each step is explicit. Cost is O(N^2).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdecay/core.hpp"
#include "qdecay/reservoir.hpp"

namespace qdecay {

template <class T>
struct VolterraSolution {
    Signal<T> x;
    Signal<T> xdot;  ///< evaluated right-hand side, not a finite difference
};

using AmplitudeSolution = VolterraSolution<cplx>;

VolterraSolution<double> propagate_scalar_volterra(const RealSignal& kernel, double x0);
VolterraSolution<cplx> propagate_scalar_volterra(const ComplexSignal& kernel, cplx x0);

/// G(t) with G(0) = 1 driven by the correlation function sampled on grid.
AmplitudeSolution solve_amplitude(const CorrelationFunction& cf, const TimeGrid& grid);

struct Deconvolution {
    RealSignal kernel;
    bool ill_conditioned{false};
    std::vector<std::string> warnings;
};

/// Recovers k from z' = -k * z. k(0) is taken from anchor when given, otherwise from a
/// one-sided second difference of z (k(0) = -z''(0)).
Deconvolution deconvolve_first_kind(const RealSignal& z, const RealSignal& zdot,
                                    std::optional<double> anchor = std::nullopt);

}  // namespace qdecay

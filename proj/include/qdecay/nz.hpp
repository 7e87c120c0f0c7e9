// nz.hpp: Nakajima-Zwanzig memory kernels and convolution-type propagation
//
// The kernel acting on the qubit is fixed by three real functions:
//   K(tau) rho = -i eps(tau) [s+s-, rho]
//              + k1(tau) (s- rho s+ - {s+s-, rho}/2)
//              + k2(tau) (s+s- rho s+s- - {s+s-, rho}/2),
// which gives rho11' = -k1 * rho11 and rho10' = -((k1 + k2)/2 + i eps) * rho10.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qdecay/core.hpp"
#include "qdecay/reservoir.hpp"
#include "qdecay/volterra.hpp"

namespace qdecay {

enum class KernelProvenance { exact_deconvolved, lorentzian_analytic, order2, order4, phenomenological };

std::string_view to_string(KernelProvenance p) noexcept;

struct MemoryKernel {
    RealSignal epsilon;
    RealSignal k1;
    RealSignal k2;
    KernelProvenance provenance;
    std::vector<std::string> warnings;
};

/// Exact kernel: eps = f2, k1 deconvolved from z = |G|^2, k2 = 2 f1 - k1.
MemoryKernel nz_kernel_exact(const CorrelationFunction& cf, const AmplitudeSolution& amplitude);

MemoryKernel nz_kernel_lorentzian(const LorentzianParams& p, const TimeGrid& grid);

/// Fourth-order contribution to k1 alone:
///   k1^(4)(tau) = -2 Re int_0^tau dt2 int_0^t2 dt3 [f(tau - t3) f(-t2) + f(tau) f(t3 - t2)].
RealSignal k1_order4_term(const CorrelationFunction& cf, const TimeGrid& grid);

/// Kernel summed through the given order (2 or 4).
MemoryKernel nz_kernel_perturbative(const CorrelationFunction& cf, const TimeGrid& grid, int order);

Trajectory nz_propagate(const MemoryKernel& kernel, const QubitState& rho0);

/// Default phenomenological kernel function: 2 f1 / gamma_M, so that gamma_M h = 2 f1.
RealSignal default_ansatz_kernel(const CorrelationFunction& cf, const TimeGrid& grid, const MarkovParams& markov);

/// rho' = int_0^t h(t - s) L rho(s) ds with L the Lindblad generator of markov.
Trajectory ansatz_propagate(const MarkovParams& markov, const RealSignal& h_kernel, const QubitState& rho0);

/// Residual of int int r(t2-t3) r(t3) - (int r)^2 + int int r(tau-t3) r(t2), evaluated
/// separately for r = f1 and r = f2 by nested trapezoid. Analytically zero.
struct IdentityCheck {
    RealSignal residual_real_part;
    RealSignal residual_imag_part;
    double max_residual{0.0};
};

IdentityCheck check_memory_identity(const CorrelationFunction& cf, const TimeGrid& grid);

}  // namespace qdecay

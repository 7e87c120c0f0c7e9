// oracle.hpp: Brute-force Schrodinger evolution in the zero/one-excitation sector
//
// Interaction-picture amplitude equations for a finite mode set:
//   c1'  = -i sum_k g_k exp(+i (w0 - w_k) t) c_k
//   c_k' = -i conj(g_k) exp(-i (w0 - w_k) t) c1,   c_k(0) = 0.
// c0 multiplies a state annihilated by the interaction and never changes.

#pragma once

#include <vector>

#include "qdecay/core.hpp"
#include "qdecay/reservoir.hpp"

namespace qdecay {

struct OneExcitationState {
    cplx c0;
    cplx c1;
    std::vector<cplx> ck;

    double excitation() const noexcept;  ///< |c1|^2 + sum |c_k|^2
    double norm() const noexcept;        ///< |c0|^2 + excitation()
};

struct OracleRun {
    ComplexSignal c1;
    OneExcitationState initial_state;
    OneExcitationState final_state;
    double max_norm_drift{0.0};        ///< max over steps of |norm(t) - norm(0)|
    double max_excitation_drift{0.0};  ///< max over steps of |excitation(t) - excitation(0)|
};

/// Largest admissible h * max|w0 - w_k| for the fixed-step integrator.
inline constexpr double max_phase_per_step = 0.1;

/// Classical fourth-order Runge-Kutta on the amplitude equations. c0 defaults to
/// sqrt(1 - |c1_0|^2) so the total state is normalised.
OracleRun evolve_one_excitation(const ModeSet& modes, cplx c1_0, const TimeGrid& grid);

}  // namespace qdecay

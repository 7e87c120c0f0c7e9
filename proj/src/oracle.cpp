// oracle.cpp: Fixed-step RK4 for the single-excitation amplitudes

#include "qdecay/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdecay {

double OneExcitationState::excitation() const noexcept
{
    double sum = std::norm(c1);
    for (const cplx& c : ck) sum += std::norm(c);
    return sum;
}

double OneExcitationState::norm() const noexcept { return std::norm(c0) + excitation(); }

namespace {

struct Rhs {
    const ModeSet& modes;
    std::vector<cplx> phase;  // exp(+i (w0 - w_k) t) at the current stage time

    void set_time(double t)
    {
        for (std::size_t k = 0; k < modes.modes.size(); ++k) {
            phase[k] = std::polar(1.0, (modes.omega0 - modes.modes[k].omega) * t);
        }
    }

    // d(c1, ck)/dt at the stage time last passed to set_time.
    void operator()(cplx c1, const std::vector<cplx>& ck, cplx& dc1, std::vector<cplx>& dck) const
    {
        const cplx minus_i(0.0, -1.0);
        cplx sum{0.0, 0.0};
        for (std::size_t k = 0; k < ck.size(); ++k) {
            const cplx g = modes.modes[k].coupling;
            sum += g * phase[k] * ck[k];
            dck[k] = minus_i * std::conj(g) * std::conj(phase[k]) * c1;
        }
        dc1 = minus_i * sum;
    }
};

}  // namespace

OracleRun evolve_one_excitation(const ModeSet& modes, cplx c1_0, const TimeGrid& grid)
{
    if (std::abs(c1_0) > 1.0) throw std::invalid_argument("initial excited amplitude must satisfy |c1| <= 1");
    const double h = grid.step();
    if (h * modes.max_detuning() > max_phase_per_step) {
        throw std::domain_error("oracle step too large: h * max|w0 - w_k| = " +
                                std::to_string(h * modes.max_detuning()) + " exceeds 0.1");
    }

    const std::size_t n_modes = modes.modes.size();
    OneExcitationState state{cplx(std::sqrt(std::max(0.0, 1.0 - std::norm(c1_0))), 0.0), c1_0,
                             std::vector<cplx>(n_modes, cplx(0.0, 0.0))};
    OracleRun run{ComplexSignal(grid), state, state, 0.0, 0.0};
    run.c1[0] = c1_0;
    const double norm0 = state.norm();
    const double excitation0 = state.excitation();

    Rhs rhs{modes, std::vector<cplx>(n_modes)};
    std::vector<cplx> k1(n_modes), k2(n_modes), k3(n_modes), k4(n_modes), stage(n_modes);
    cplx d1, d2, d3, d4;

    for (std::size_t n = 1; n < grid.size(); ++n) {
        const double t = grid.time(n - 1);

        rhs.set_time(t);
        rhs(state.c1, state.ck, d1, k1);

        rhs.set_time(t + 0.5 * h);
        for (std::size_t k = 0; k < n_modes; ++k) stage[k] = state.ck[k] + 0.5 * h * k1[k];
        rhs(state.c1 + 0.5 * h * d1, stage, d2, k2);
        for (std::size_t k = 0; k < n_modes; ++k) stage[k] = state.ck[k] + 0.5 * h * k2[k];
        rhs(state.c1 + 0.5 * h * d2, stage, d3, k3);

        rhs.set_time(t + h);
        for (std::size_t k = 0; k < n_modes; ++k) stage[k] = state.ck[k] + h * k3[k];
        rhs(state.c1 + h * d3, stage, d4, k4);

        state.c1 += h / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
        for (std::size_t k = 0; k < n_modes; ++k) {
            state.ck[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
        run.c1[n] = state.c1;

        const double excitation = state.excitation();
        run.max_excitation_drift = std::max(run.max_excitation_drift, std::abs(excitation - excitation0));
        run.max_norm_drift = std::max(run.max_norm_drift, std::abs(state.norm() - norm0));
    }
    run.final_state = std::move(state);
    return run;
}

}  // namespace qdecay

// core.cpp: Exact map, Choi certification and the Markovian baseline

#include "qdecay/core.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qdecay {

TimeGrid::TimeGrid(double step, std::size_t intervals) : step_(step), intervals_(intervals)
{
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("time step must be positive and finite");
    }
    if (intervals < 1) {
        throw std::invalid_argument("time grid needs at least one interval");
    }
}

TimeGrid TimeGrid::covering(double step, double t_end)
{
    if (!(step > 0.0) || !(t_end > 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument("time step and end time must be positive");
    }
    const double n = std::round(t_end / step);
    if (n < 1.0) {
        throw std::invalid_argument("end time is shorter than one step");
    }
    return TimeGrid(step, static_cast<std::size_t>(n));
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what)
{
    if (!(a == b)) {
        throw std::invalid_argument(std::string(what) + ": signals are defined on different grids");
    }
}

RealSignal real_part(const ComplexSignal& s)
{
    RealSignal out(s.grid);
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].real();
    return out;
}

RealSignal imag_part(const ComplexSignal& s)
{
    RealSignal out(s.grid);
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].imag();
    return out;
}

bool QubitState::is_positive(double tol) const noexcept
{
    return min_eigenvalue() >= -tol;
}

double QubitState::min_eigenvalue() const noexcept
{
    // Eigenvalues of [[r11, r10], [r10*, r00]] with unit trace.
    const double diff = rho11 - rho00();
    const double radius = std::sqrt(0.25 * diff * diff + std::norm(rho10));
    return 0.5 - radius;
}

std::vector<bool> Trajectory::positivity_flags(double tol) const
{
    std::vector<bool> flags(states.size(), false);
    const std::size_t valid = valid_count();
    for (std::size_t i = 0; i < valid; ++i) flags[i] = states[i].is_positive(tol);
    return flags;
}

QubitState apply_map(MapPoint point, const QubitState& rho0) noexcept
{
    return QubitState{std::norm(point.g) * rho0.rho11, point.g * rho0.rho10};
}

Trajectory apply_map(const ComplexSignal& g, const QubitState& rho0)
{
    Trajectory out{g.grid, {}, std::nullopt};
    out.states.reserve(g.size());
    for (const cplx& value : g.values) out.states.push_back(apply_map(MapPoint{value}, rho0));
    return out;
}

Eigen::Matrix4cd choi_matrix(MapPoint point)
{
    // Basis index: 2*a + b for |a> (x) |b>, with a, b in {0 -> |1>, 1 -> |0>}.
    const double pop = std::norm(point.g);
    Eigen::Matrix4cd choi = Eigen::Matrix4cd::Zero();
    // Phi(|1><1|) (x) |1><1|
    choi(0, 0) = pop;
    choi(2, 2) = 1.0 - pop;
    // Phi(|0><0|) (x) |0><0|
    choi(3, 3) = 1.0;
    // Phi(|1><0|) (x) |1><0| and its adjoint
    choi(0, 3) = point.g;
    choi(3, 0) = std::conj(point.g);
    return choi;
}

double min_choi_eigenvalue(MapPoint point)
{
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(choi_matrix(point), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

Trajectory markov_propagate(const MarkovParams& params, const QubitState& rho0, const TimeGrid& grid)
{
    if (params.gamma < 0.0) {
        throw std::invalid_argument("Markovian decay rate must be non-negative");
    }
    Trajectory out{grid, {}, std::nullopt};
    out.states.reserve(grid.size());
    const cplx coherence_rate{0.5 * params.gamma, 0.5 * params.shift};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.time(i);
        out.states.push_back(QubitState{std::exp(-params.gamma * t) * rho0.rho11,
                                        std::exp(-coherence_rate * t) * rho0.rho10});
    }
    return out;
}

}  // namespace qdecay

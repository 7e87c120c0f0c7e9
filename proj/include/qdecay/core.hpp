// core.hpp: Time grids, sampled signals, qubit states and the exact amplitude-damping map

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qdecay {

using cplx = std::complex<double>;

/// Raised when a numerical routine meets non-finite data. Carries the grid index.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, std::size_t index)
        : std::runtime_error(what + " (time index " + std::to_string(index) + ")"), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Uniform grid t_i = i*h, i = 0..N.
class TimeGrid {
public:
    TimeGrid(double step, std::size_t intervals);

    /// Grid with step h covering [0, t_end]; N = round(t_end/h).
    static TimeGrid covering(double step, double t_end);

    double step() const noexcept { return step_; }
    std::size_t intervals() const noexcept { return intervals_; }
    std::size_t size() const noexcept { return intervals_ + 1; }
    double time(std::size_t i) const noexcept { return static_cast<double>(i) * step_; }
    double end() const noexcept { return time(intervals_); }

    bool operator==(const TimeGrid&) const = default;

private:
    double step_;
    std::size_t intervals_;
};

template <class T>
struct Signal {
    TimeGrid grid;
    std::vector<T> values;

    Signal(TimeGrid g, T fill = T{}) : grid(g), values(g.size(), fill) {}
    Signal(TimeGrid g, std::vector<T> v) : grid(g), values(std::move(v))
    {
        if (values.size() != grid.size()) {
            throw std::invalid_argument("signal length does not match grid point count");
        }
    }

    std::size_t size() const noexcept { return values.size(); }
    T& operator[](std::size_t i) { return values[i]; }
    const T& operator[](std::size_t i) const { return values[i]; }
};

using RealSignal = Signal<double>;
using ComplexSignal = Signal<cplx>;

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what);

RealSignal real_part(const ComplexSignal& s);
RealSignal imag_part(const ComplexSignal& s);

/// Running trapezoid integral: out[n] = int_0^{t_n} s.
template <class T>
Signal<T> cumulative_trapezoid(const Signal<T>& s)
{
    Signal<T> out(s.grid);
    const double half_h = 0.5 * s.grid.step();
    for (std::size_t n = 1; n < s.size(); ++n) {
        out[n] = out[n - 1] + half_h * (s[n - 1] + s[n]);
    }
    return out;
}

/// Qubit density matrix in the {|1>, |0>} basis; only rho11 and rho10 are stored.
struct QubitState {
    double rho11{0.0};
    cplx rho10{0.0, 0.0};

    double rho00() const noexcept { return 1.0 - rho11; }
    cplx rho01() const noexcept { return std::conj(rho10); }

    /// |rho10|^2 <= rho11*rho00 and rho11 in [0,1], with slack tol.
    bool is_positive(double tol = 1e-12) const noexcept;
    double min_eigenvalue() const noexcept;
};

/// One sample of the exact map, fully characterised by G(t).
struct MapPoint {
    cplx g{1.0, 0.0};
};

struct MarkovParams {
    double gamma{0.0};
    double shift{0.0};
};

/// States on a grid. breakdown_index marks the first index that is not valid (TCL only).
struct Trajectory {
    TimeGrid grid;
    std::vector<QubitState> states;
    std::optional<std::size_t> breakdown_index;

    std::size_t valid_count() const noexcept { return breakdown_index.value_or(states.size()); }
    std::vector<bool> positivity_flags(double tol = 1e-12) const;
};

QubitState apply_map(MapPoint point, const QubitState& rho0) noexcept;

/// Unnormalised Choi matrix sum_ij Phi(|i><j|) (x) |i><j|, basis order (1,0) (x) (1,0).
Eigen::Matrix4cd choi_matrix(MapPoint point);

double min_choi_eigenvalue(MapPoint point);

/// Exact map applied pointwise to a sampled G(t).
Trajectory apply_map(const ComplexSignal& g, const QubitState& rho0);

/// Lindblad semigroup with constant rate and shift (interaction picture).
Trajectory markov_propagate(const MarkovParams& params, const QubitState& rho0, const TimeGrid& grid);

}  // namespace qdecay

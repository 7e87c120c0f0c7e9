// volterra.cpp: Trapezoidal product integration and first-kind deconvolution

#include "qdecay/volterra.hpp"

#include <cmath>

namespace qdecay {

namespace {

bool finite(double v) { return std::isfinite(v); }
bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

template <class T>
VolterraSolution<T> propagate(const Signal<T>& kernel, T x0, const char* what)
{
    const TimeGrid& grid = kernel.grid;
    const double h = grid.step();
    const std::size_t n_points = grid.size();
    for (std::size_t i = 0; i < n_points; ++i) {
        if (!finite(kernel[i])) throw NumericError(std::string(what) + ": non-finite kernel sample", i);
    }

    VolterraSolution<T> out{Signal<T>(grid), Signal<T>(grid)};
    auto& x = out.x.values;
    auto& xdot = out.xdot.values;
    x[0] = x0;
    xdot[0] = T{};

    const T k0 = kernel[0];
    const T diagonal = 1.0 + 0.25 * h * h * k0;
    for (std::size_t n = 1; n < n_points; ++n) {
        T memory = 0.5 * kernel[n] * x[0];
        for (std::size_t j = 1; j < n; ++j) memory += kernel[n - j] * x[j];
        x[n] = (x[n - 1] + 0.5 * h * xdot[n - 1] - 0.5 * h * h * memory) / diagonal;
        xdot[n] = -h * (memory + 0.5 * k0 * x[n]);
        if (!finite(x[n])) throw NumericError(std::string(what) + ": solution became non-finite", n);
    }
    return out;
}

}  // namespace

VolterraSolution<double> propagate_scalar_volterra(const RealSignal& kernel, double x0)
{
    return propagate(kernel, x0, "volterra");
}

VolterraSolution<cplx> propagate_scalar_volterra(const ComplexSignal& kernel, cplx x0)
{
    return propagate(kernel, x0, "volterra");
}

AmplitudeSolution solve_amplitude(const CorrelationFunction& cf, const TimeGrid& grid)
{
    return propagate(cf.sample(grid), cplx(1.0, 0.0), "amplitude");
}

Deconvolution deconvolve_first_kind(const RealSignal& z, const RealSignal& zdot, std::optional<double> anchor)
{
    require_same_grid(z.grid, zdot.grid, "deconvolve_first_kind");
    const TimeGrid& grid = z.grid;
    const double h = grid.step();
    const std::size_t n_points = grid.size();
    if (std::abs(z[0] - 1.0) > 1e-12) {
        throw std::invalid_argument("deconvolution requires z(0) = 1");
    }
    if (std::abs(zdot[0]) > 1e-12) {
        throw std::invalid_argument("deconvolution requires z'(0) = 0");
    }
    for (std::size_t i = 0; i < n_points; ++i) {
        if (!std::isfinite(z[i]) || !std::isfinite(zdot[i])) {
            throw NumericError("deconvolution: non-finite input sample", i);
        }
    }

    Deconvolution out{RealSignal(grid), false, {}};
    auto& k = out.kernel.values;
    if (anchor) {
        k[0] = *anchor;
    } else {
        if (n_points < 4) throw std::invalid_argument("deconvolution without anchor needs at least 4 samples");
        const double second = (2.0 * z[0] - 5.0 * z[1] + 4.0 * z[2] - z[3]) / (h * h);
        k[0] = -second / z[0];
    }

    // zdot_n = -h [ k_n z_0/2 + sum_{j=1}^{n-1} k_{n-j} z_j + k_0 z_n/2 ], solved for k_n.
    for (std::size_t n = 1; n < n_points; ++n) {
        double memory = 0.5 * k[0] * z[n];
        for (std::size_t j = 1; j < n; ++j) memory += k[n - j] * z[j];
        k[n] = -2.0 * (zdot[n] / h + memory) / z[0];
    }

    // z touching zero at isolated points is harmless; a long stretch near zero is not.
    constexpr double near_zero = 1e-10;
    constexpr std::size_t persistent_run = 10;
    std::size_t run = 0;
    for (std::size_t i = 0; i < n_points; ++i) {
        run = std::abs(z[i]) < near_zero ? run + 1 : 0;
        if (run >= persistent_run) {
            out.ill_conditioned = true;
            out.warnings.push_back("deconvolution: z stays below 1e-10 from t = " +
                                   std::to_string(grid.time(i + 1 - run)) + "; kernel tail is poorly determined");
            break;
        }
    }
    return out;
}

}  // namespace qdecay

// nz.cpp: Memory kernel construction and Nakajima-Zwanzig propagation

#include "qdecay/nz.hpp"

#include <algorithm>
#include <cmath>

#include "qdecay/lorentzian.hpp"

namespace qdecay {

std::string_view to_string(KernelProvenance p) noexcept
{
    switch (p) {
    case KernelProvenance::exact_deconvolved: return "exact-deconvolved";
    case KernelProvenance::lorentzian_analytic: return "lorentzian-analytic";
    case KernelProvenance::order2: return "order2";
    case KernelProvenance::order4: return "order4";
    case KernelProvenance::phenomenological: return "phenomenological";
    }
    return "unknown";
}

MemoryKernel nz_kernel_exact(const CorrelationFunction& cf, const AmplitudeSolution& amplitude)
{
    const TimeGrid& grid = amplitude.x.grid;
    const ComplexSignal f = cf.sample(grid);

    RealSignal z(grid);
    RealSignal zdot(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx g = amplitude.x[i];
        z[i] = std::norm(g);
        zdot[i] = 2.0 * std::real(std::conj(g) * amplitude.xdot[i]);
    }
    // z''(0) = -2 f1(0) fixes the first kernel sample.
    Deconvolution dec = deconvolve_first_kind(z, zdot, 2.0 * f[0].real());

    MemoryKernel out{imag_part(f), std::move(dec.kernel), RealSignal(grid), KernelProvenance::exact_deconvolved,
                     std::move(dec.warnings)};
    for (std::size_t i = 0; i < grid.size(); ++i) out.k2[i] = 2.0 * f[i].real() - out.k1[i];
    return out;
}

MemoryKernel nz_kernel_lorentzian(const LorentzianParams& p, const TimeGrid& grid)
{
    p.validate();
    MemoryKernel out{RealSignal(grid), RealSignal(grid), RealSignal(grid), KernelProvenance::lorentzian_analytic, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.time(i);
        out.k1[i] = lorentzian::memory_kernel_k1(p, t);
        out.k2[i] = p.gamma0 * p.lambda * std::exp(-p.lambda * t) - out.k1[i];
    }
    return out;
}

RealSignal k1_order4_term(const CorrelationFunction& cf, const TimeGrid& grid)
{
    const double h = grid.step();
    const ComplexSignal f = cf.sample(grid);
    const ComplexSignal big_f = cumulative_trapezoid(f);
    const ComplexSignal phi = cumulative_trapezoid(big_f);

    // int_0^t2 f(tau - t3) dt3 = F(tau) - F(tau - t2) and int_0^t2 f(t3 - t2) dt3 = conj F(t2)
    // hold exactly for the trapezoid sums, so the inner integrals are read off F.
    RealSignal out(grid);
    for (std::size_t m = 1; m < grid.size(); ++m) {
        cplx first{0.0, 0.0};
        for (std::size_t j = 0; j <= m; ++j) {
            const double w = (j == 0 || j == m) ? 0.5 : 1.0;
            first += w * std::conj(f[j]) * (big_f[m] - big_f[m - j]);
        }
        first *= h;
        const cplx second = f[m] * std::conj(phi[m]);
        out[m] = -2.0 * std::real(first + second);
    }
    return out;
}

MemoryKernel nz_kernel_perturbative(const CorrelationFunction& cf, const TimeGrid& grid, int order)
{
    if (order != 2 && order != 4) throw std::invalid_argument("perturbative memory kernel supports orders 2 and 4");
    const ComplexSignal f = cf.sample(grid);
    MemoryKernel out{imag_part(f), RealSignal(grid), RealSignal(grid),
                     order == 2 ? KernelProvenance::order2 : KernelProvenance::order4, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) out.k1[i] = 2.0 * f[i].real();
    if (order == 4) {
        const RealSignal k4 = k1_order4_term(cf, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out.k1[i] += k4[i];
            out.k2[i] = -k4[i];
        }
    }
    return out;
}

Trajectory nz_propagate(const MemoryKernel& kernel, const QubitState& rho0)
{
    const TimeGrid& grid = kernel.k1.grid;
    require_same_grid(grid, kernel.k2.grid, "nz_propagate");
    require_same_grid(grid, kernel.epsilon.grid, "nz_propagate");

    ComplexSignal coherence_kernel(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        coherence_kernel[i] = cplx(0.5 * (kernel.k1[i] + kernel.k2[i]), kernel.epsilon[i]);
    }
    const auto population = propagate_scalar_volterra(kernel.k1, rho0.rho11);
    const auto coherence = propagate_scalar_volterra(coherence_kernel, rho0.rho10);

    Trajectory out{grid, {}, std::nullopt};
    out.states.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.states.push_back(QubitState{population.x[i], coherence.x[i]});
    return out;
}

RealSignal default_ansatz_kernel(const CorrelationFunction& cf, const TimeGrid& grid, const MarkovParams& markov)
{
    if (!(markov.gamma > 0.0)) {
        throw std::invalid_argument("default ansatz kernel needs a positive Markovian rate");
    }
    RealSignal out = real_part(cf.sample(grid));
    for (double& v : out.values) v *= 2.0 / markov.gamma;
    return out;
}

Trajectory ansatz_propagate(const MarkovParams& markov, const RealSignal& h_kernel, const QubitState& rho0)
{
    if (markov.gamma < 0.0) throw std::invalid_argument("Markovian decay rate must be non-negative");
    const TimeGrid& grid = h_kernel.grid;
    RealSignal population_kernel(grid);
    ComplexSignal coherence_kernel(grid);
    const cplx coherence_rate(0.5 * markov.gamma, 0.5 * markov.shift);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        population_kernel[i] = markov.gamma * h_kernel[i];
        coherence_kernel[i] = coherence_rate * h_kernel[i];
    }
    const auto population = propagate_scalar_volterra(population_kernel, rho0.rho11);
    const auto coherence = propagate_scalar_volterra(coherence_kernel, rho0.rho10);

    Trajectory out{grid, {}, std::nullopt};
    out.states.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.states.push_back(QubitState{population.x[i], coherence.x[i]});
    return out;
}

namespace {

RealSignal identity_residual(const RealSignal& r)
{
    const TimeGrid& grid = r.grid;
    const double h = grid.step();
    const RealSignal big_r = cumulative_trapezoid(r);

    // Self-convolution C(t2) = int_0^t2 r(t2 - t3) r(t3) dt3, then its running integral.
    RealSignal conv(grid);
    for (std::size_t m = 1; m < grid.size(); ++m) {
        double sum = 0.5 * (r[m] * r[0] + r[0] * r[m]);
        for (std::size_t j = 1; j < m; ++j) sum += r[m - j] * r[j];
        conv[m] = h * sum;
    }
    const RealSignal first = cumulative_trapezoid(conv);

    RealSignal out(grid);
    for (std::size_t m = 1; m < grid.size(); ++m) {
        double third = 0.0;
        for (std::size_t j = 0; j <= m; ++j) {
            const double w = (j == 0 || j == m) ? 0.5 : 1.0;
            third += w * r[j] * (big_r[m] - big_r[m - j]);
        }
        third *= h;
        out[m] = first[m] - big_r[m] * big_r[m] + third;
    }
    return out;
}

double max_abs(const RealSignal& s)
{
    double out = 0.0;
    for (double v : s.values) out = std::max(out, std::abs(v));
    return out;
}

}  // namespace

IdentityCheck check_memory_identity(const CorrelationFunction& cf, const TimeGrid& grid)
{
    const ComplexSignal f = cf.sample(grid);
    IdentityCheck out{identity_residual(real_part(f)), identity_residual(imag_part(f)), 0.0};
    out.max_residual = std::max(max_abs(out.residual_real_part), max_abs(out.residual_imag_part));
    return out;
}

}  // namespace qdecay

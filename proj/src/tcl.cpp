// tcl.cpp: Time-local generator coefficients and their perturbative expansion

#include "qdecay/tcl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qdecay {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// h * sum'' a(t_m - s) b(s) over s in [0, t_m] (trapezoid, end weights 1/2).
cplx trapezoid_convolution(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t m, double h)
{
    if (m == 0) return {0.0, 0.0};
    cplx sum = 0.5 * (a[m] * b[0] + a[0] * b[m]);
    for (std::size_t j = 1; j < m; ++j) sum += a[m - j] * b[j];
    return h * sum;
}

}  // namespace

TclCoefficients tcl_coefficients(const ComplexSignal& g, const ComplexSignal& gdot, double threshold)
{
    require_same_grid(g.grid, gdot.grid, "tcl_coefficients");
    if (std::abs(g[0] - cplx(1.0, 0.0)) > 1e-12) {
        throw std::invalid_argument("tcl_coefficients requires G(0) = 1");
    }
    const TimeGrid& grid = g.grid;
    TclCoefficients out{RealSignal(grid, nan), RealSignal(grid, nan), std::nullopt, std::nullopt};

    for (std::size_t n = 0; n < g.size(); ++n) {
        if (n > 0) {
            // Closest approach of the segment G_{n-1} -> G_n to the origin.
            const cplx step = g[n] - g[n - 1];
            const double len2 = std::norm(step);
            double s = len2 > 0.0 ? -std::real(std::conj(g[n - 1]) * step) / len2 : 1.0;
            s = std::clamp(s, 0.0, 1.0);
            if (std::abs(g[n - 1] + s * step) < threshold) {
                out.breakdown_index = n;
                out.breakdown_time = grid.time(n - 1) + s * grid.step();
                break;
            }
        }
        const cplx ratio = gdot[n] / g[n];
        out.gamma[n] = 0.0 - 2.0 * ratio.real();
        out.shift[n] = 0.0 - 2.0 * ratio.imag();
    }
    return out;
}

ComplexSignal ExpansionTerms::partial_sum() const
{
    if (g_terms.empty()) throw std::logic_error("expansion has no terms");
    ComplexSignal out(g_terms.front().grid, cplx(1.0, 0.0));
    for (const auto& term : g_terms) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += term[i];
    }
    return out;
}

ExpansionTerms expand_G(const CorrelationFunction& cf, const TimeGrid& grid, int max_order)
{
    if (max_order < 2 || max_order % 2 != 0) {
        throw std::invalid_argument("expansion order must be a positive even integer");
    }
    const std::size_t n_terms = static_cast<std::size_t>(max_order / 2);
    const double h = grid.step();
    const std::vector<cplx> f = cf.sample(grid).values;

    ExpansionTerms out;
    out.order = max_order;
    std::vector<cplx> previous(grid.size(), cplx(1.0, 0.0));
    for (std::size_t term = 0; term < n_terms; ++term) {
        // G^(2n)'(t) = -int_0^t f(t - s) G^(2n-2)(s) ds; G^(2n) is its running integral.
        ComplexSignal gdot(grid);
        for (std::size_t m = 0; m < grid.size(); ++m) gdot[m] = -trapezoid_convolution(f, previous, m, h);
        ComplexSignal g = cumulative_trapezoid(gdot);
        previous = g.values;
        out.g_terms.push_back(std::move(g));
        out.gdot_terms.push_back(std::move(gdot));
    }

    // G'/G = sum_n c_n with c_n = a_n' - sum_{k<n} c_k a_{n-k}; rate term = -2 c_n.
    std::vector<ComplexSignal> c;
    for (std::size_t n = 0; n < n_terms; ++n) {
        ComplexSignal cn = out.gdot_terms[n];
        for (std::size_t k = 0; k < n; ++k) {
            const ComplexSignal& a = out.g_terms[n - k - 1];
            for (std::size_t i = 0; i < cn.size(); ++i) cn[i] -= c[k][i] * a[i];
        }
        ComplexSignal rate(grid);
        for (std::size_t i = 0; i < rate.size(); ++i) rate[i] = -2.0 * cn[i];
        c.push_back(std::move(cn));
        out.rate_terms.push_back(std::move(rate));
    }
    return out;
}

TclCoefficients tcl_rates_perturbative(const CorrelationFunction& cf, const TimeGrid& grid, int order)
{
    if (order != 2 && order != 4) throw std::invalid_argument("perturbative TCL rates support orders 2 and 4");
    const double h = grid.step();
    const ComplexSignal f = cf.sample(grid);
    const ComplexSignal big_f = cumulative_trapezoid(f);  // F(t) = int_0^t f

    ComplexSignal rate(grid);
    if (order == 2) {
        for (std::size_t m = 0; m < grid.size(); ++m) rate[m] = 2.0 * big_f[m];
    } else {
        // The t1 integration of the triple integral is done through the primitives
        // F and Phi = int F, leaving one trapezoid sum per output time:
        //   A(t) = int_0^t f(t-s) [Phi(t) - Phi(t-s) - Phi(s)] ds
        //   B(t) = int_0^t F(t-s) [F(t) - F(t-s)] ds
        const ComplexSignal phi = cumulative_trapezoid(big_f);
        for (std::size_t m = 1; m < grid.size(); ++m) {
            cplx a_sum{0.0, 0.0};
            cplx b_sum{0.0, 0.0};
            for (std::size_t j = 0; j <= m; ++j) {
                const double w = (j == 0 || j == m) ? 0.5 : 1.0;
                a_sum += w * f[m - j] * (phi[m] - phi[m - j] - phi[j]);
                b_sum += w * big_f[m - j] * (big_f[m] - big_f[m - j]);
            }
            rate[m] = 2.0 * h * (a_sum + b_sum);
        }
    }
    return TclCoefficients{real_part(rate), imag_part(rate), std::nullopt, std::nullopt};
}

TclCoefficients operator+(const TclCoefficients& a, const TclCoefficients& b)
{
    require_same_grid(a.gamma.grid, b.gamma.grid, "TclCoefficients sum");
    TclCoefficients out = a;
    for (std::size_t i = 0; i < out.gamma.size(); ++i) {
        out.gamma[i] += b.gamma[i];
        out.shift[i] += b.shift[i];
    }
    out.breakdown_index.reset();
    out.breakdown_time.reset();
    const auto first_bad = std::min(a.valid_count(), b.valid_count());
    if (first_bad < out.gamma.size()) out.breakdown_index = first_bad;
    return out;
}

ComplexSignal tcl_effective_amplitude(const TclCoefficients& coeffs)
{
    const TimeGrid& grid = coeffs.gamma.grid;
    ComplexSignal out(grid, cplx(nan, nan));
    const std::size_t valid = coeffs.valid_count();
    const double half_h = 0.5 * grid.step();
    cplx exponent{0.0, 0.0};
    out[0] = cplx(1.0, 0.0);
    for (std::size_t n = 1; n < valid; ++n) {
        const cplx left(coeffs.gamma[n - 1], coeffs.shift[n - 1]);
        const cplx right(coeffs.gamma[n], coeffs.shift[n]);
        exponent += half_h * (left + right);
        out[n] = std::exp(-0.5 * exponent);
    }
    return out;
}

Trajectory tcl_propagate(const TclCoefficients& coeffs, const QubitState& rho0)
{
    Trajectory out = apply_map(tcl_effective_amplitude(coeffs), rho0);
    if (coeffs.valid_count() < out.states.size()) out.breakdown_index = coeffs.valid_count();
    return out;
}

}  // namespace qdecay

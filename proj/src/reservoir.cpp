// reservoir.cpp: Correlation function variants and Lorentzian mode sampling

#include "qdecay/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdecay {

void LorentzianParams::validate() const
{
    if (!(gamma0 > 0.0) || !(lambda > 0.0) || !std::isfinite(gamma0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("Lorentzian gamma0 and lambda must be positive and finite");
    }
}

cplx LorentzianParams::delta() const { return std::sqrt(cplx(1.0 - 2.0 * gamma0 / lambda, 0.0)); }
cplx LorentzianParams::delta_prime() const { return std::sqrt(cplx(1.0 - 4.0 * gamma0 / lambda, 0.0)); }
cplx LorentzianParams::delta_hat() const { return std::sqrt(cplx(2.0 * gamma0 / lambda - 1.0, 0.0)); }

double ModeSet::max_detuning() const noexcept
{
    double out = 0.0;
    for (const auto& m : modes) out = std::max(out, std::abs(omega0 - m.omega));
    return out;
}

CorrelationFunction CorrelationFunction::lorentzian(LorentzianParams p)
{
    p.validate();
    return CorrelationFunction(Repr{p});
}

CorrelationFunction CorrelationFunction::discrete(ModeSet modes)
{
    for (const auto& m : modes.modes) {
        if (!std::isfinite(m.coupling.real()) || !std::isfinite(m.coupling.imag()) || !std::isfinite(m.omega)) {
            throw std::invalid_argument("mode couplings and frequencies must be finite");
        }
    }
    if (!std::isfinite(modes.omega0)) throw std::invalid_argument("omega0 must be finite");
    return CorrelationFunction(Repr{std::move(modes)});
}

CorrelationFunction CorrelationFunction::tabulated(ComplexSignal samples)
{
    for (const cplx& v : samples.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("tabulated correlation contains non-finite samples");
        }
    }
    return CorrelationFunction(Repr{std::move(samples)});
}

cplx CorrelationFunction::operator()(double tau) const
{
    if (const auto* p = as_lorentzian()) {
        return cplx(0.5 * p->gamma0 * p->lambda * std::exp(-p->lambda * std::abs(tau)), 0.0);
    }
    if (const auto* m = as_modes()) {
        cplx sum{0.0, 0.0};
        for (const auto& mode : m->modes) {
            sum += std::norm(mode.coupling) * std::polar(1.0, (m->omega0 - mode.omega) * tau);
        }
        return sum;
    }
    const ComplexSignal& table = *as_table();
    const double a = std::abs(tau);
    const double h = table.grid.step();
    const double pos = a / h;
    const std::size_t last = table.grid.intervals();
    // Samples are exact at grid times; allow rounding slack at the far end.
    if (pos > static_cast<double>(last) * (1.0 + 1e-12)) {
        throw std::out_of_range("tau outside the tabulated correlation range");
    }
    std::size_t i = std::min(static_cast<std::size_t>(pos), last);
    cplx value;
    if (i == last) {
        value = table[last];
    } else {
        const double w = pos - static_cast<double>(i);
        value = (1.0 - w) * table[i] + w * table[i + 1];
    }
    return tau < 0.0 ? std::conj(value) : value;
}

ComplexSignal CorrelationFunction::sample(const TimeGrid& grid) const
{
    ComplexSignal out(grid);
    if (const auto* table = as_table(); table && table->grid == grid) {
        return *table;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = (*this)(grid.time(i));
    return out;
}

double CorrelationFunction::hermitian_defect() const
{
    if (const auto* table = as_table()) return std::abs((*table)[0].imag());
    return 0.0;
}

bool CorrelationFunction::is_real() const
{
    if (as_lorentzian()) return true;
    if (const auto* m = as_modes()) {
        return std::all_of(m->modes.begin(), m->modes.end(),
                           [&](const Mode& mode) { return mode.omega == m->omega0; });
    }
    const auto& values = as_table()->values;
    return std::all_of(values.begin(), values.end(), [](const cplx& v) { return v.imag() == 0.0; });
}

double lorentzian_spectral_density(const LorentzianParams& p, double omega0, double omega)
{
    const double detuning = omega0 - omega;
    return p.gamma0 * p.lambda * p.lambda / (2.0 * std::numbers::pi * (detuning * detuning + p.lambda * p.lambda));
}

ModeSet sample_lorentzian_modes(const LorentzianParams& p, double omega0, std::size_t n_modes,
                                double cutoff_width)
{
    p.validate();
    if (n_modes < 2) throw std::invalid_argument("mode sampling needs at least two modes");
    if (!(cutoff_width > 0.0) || !std::isfinite(cutoff_width)) {
        throw std::invalid_argument("cutoff width must be positive");
    }
    const double half_band = cutoff_width * p.lambda;
    const double spacing = 2.0 * half_band / static_cast<double>(n_modes - 1);
    ModeSet out{omega0, {}};
    out.modes.reserve(n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        // Integer numerator keeps omega_k and omega_{n-1-k} exact mirror images.
        const double index_offset = 2.0 * static_cast<double>(k) - static_cast<double>(n_modes - 1);
        const double offset = half_band * index_offset / static_cast<double>(n_modes - 1);
        const double omega = omega0 + offset;
        const double weight = lorentzian_spectral_density(p, omega0, omega) * spacing;
        out.modes.push_back(Mode{cplx(std::sqrt(weight), 0.0), omega});
    }
    return out;
}

MarkovParams markov_limit(const CorrelationFunction& cf, const TimeGrid& grid)
{
    const ComplexSignal integral = cumulative_trapezoid(cf.sample(grid));
    const cplx total = integral.values.back();
    return MarkovParams{2.0 * total.real(), 2.0 * total.imag()};
}

}  // namespace qdecay

// reservoir.hpp: Reservoir two-point correlation functions f(tau) = f1 + i f2

#pragma once

#include <variant>
#include <vector>

#include "qdecay/core.hpp"

namespace qdecay {

/// Resonant Lorentzian reservoir: f(tau) = gamma0*lambda/2 * exp(-lambda*|tau|).
struct LorentzianParams {
    double gamma0{0.0};
    double lambda{1.0};

    void validate() const;

    cplx delta() const;        // sqrt(1 - 2 gamma0/lambda)
    cplx delta_prime() const;  // sqrt(1 - 4 gamma0/lambda)
    cplx delta_hat() const;    // sqrt(2 gamma0/lambda - 1)
};

struct Mode {
    cplx coupling;
    double omega;
};

struct ModeSet {
    double omega0{0.0};
    std::vector<Mode> modes;

    /// Largest |omega0 - omega_k|; zero for an empty set.
    double max_detuning() const noexcept;
};

class CorrelationFunction {
public:
    static CorrelationFunction lorentzian(LorentzianParams p);
    static CorrelationFunction discrete(ModeSet modes);
    /// Linear interpolation of samples on [0, t_end], extended by f(-tau) = conj f(tau).
    /// Im f(0) is not checked here; see hermitian_defect().
    static CorrelationFunction tabulated(ComplexSignal samples);

    cplx operator()(double tau) const;

    /// f sampled at the grid times.
    ComplexSignal sample(const TimeGrid& grid) const;

    /// |Im f(0)|; zero for the analytic variants.
    double hermitian_defect() const;

    /// True when f2 vanishes identically by construction.
    bool is_real() const;

    const LorentzianParams* as_lorentzian() const noexcept { return std::get_if<LorentzianParams>(&repr_); }
    const ModeSet* as_modes() const noexcept { return std::get_if<ModeSet>(&repr_); }
    const ComplexSignal* as_table() const noexcept { return std::get_if<ComplexSignal>(&repr_); }

private:
    using Repr = std::variant<LorentzianParams, ModeSet, ComplexSignal>;
    explicit CorrelationFunction(Repr r) : repr_(std::move(r)) {}

    Repr repr_;
};

inline cplx eval_correlation(const CorrelationFunction& cf, double tau) { return cf(tau); }

/// Lorentzian spectral density J(w) = gamma0 lambda^2 / (2 pi ((omega0-w)^2 + lambda^2)).
double lorentzian_spectral_density(const LorentzianParams& p, double omega0, double omega);

/// n_modes uniformly spaced over [omega0 - W lambda, omega0 + W lambda] with |g_k|^2 = J(w_k) dw.
ModeSet sample_lorentzian_modes(const LorentzianParams& p, double omega0, std::size_t n_modes,
                                double cutoff_width);

/// Born-Markov parameters gamma_M = 2 int f1, S_M = 2 int f2, integrated over the grid.
MarkovParams markov_limit(const CorrelationFunction& cf, const TimeGrid& grid);

}  // namespace qdecay

// tcl.hpp: Time-convolutionless generator: exact coefficients, perturbative rates, propagation

#pragma once

#include <optional>
#include <vector>

#include "qdecay/core.hpp"
#include "qdecay/reservoir.hpp"
#include "qdecay/volterra.hpp"

namespace qdecay {

/// Decay rate gamma(t) and frequency shift S(t) of the time-local generator.
/// Entries at and after breakdown_index are NaN.
struct TclCoefficients {
    RealSignal gamma;
    RealSignal shift;
    std::optional<std::size_t> breakdown_index;
    std::optional<double> breakdown_time;  ///< interpolated zero of G inside the breakdown interval

    std::size_t valid_count() const noexcept { return breakdown_index.value_or(gamma.size()); }
};

inline constexpr double default_breakdown_threshold = 1e-8;

/// gamma = -2 Re(G'/G), S = -2 Im(G'/G). Breakdown is declared on the first grid interval
/// whose linear interpolant of G passes within threshold of zero.
TclCoefficients tcl_coefficients(const ComplexSignal& g, const ComplexSignal& gdot,
                                 double threshold = default_breakdown_threshold);

/// Orders counted in powers of f; g_terms[i] holds G^(2i+2).
struct ExpansionTerms {
    int order{0};
    std::vector<ComplexSignal> g_terms;
    std::vector<ComplexSignal> gdot_terms;
    /// gamma^(2i+2) + i S^(2i+2), from the series of G'/G.
    std::vector<ComplexSignal> rate_terms;

    /// 1 + G^(2) + ... + G^(order).
    ComplexSignal partial_sum() const;
};

ExpansionTerms expand_G(const CorrelationFunction& cf, const TimeGrid& grid, int max_order);

/// The order-2 or order-4 contribution alone (not cumulative).
TclCoefficients tcl_rates_perturbative(const CorrelationFunction& cf, const TimeGrid& grid, int order);

/// Pointwise sum of coefficient sets on a common grid (no breakdown).
TclCoefficients operator+(const TclCoefficients& a, const TclCoefficients& b);

/// exp(-1/2 int_0^t (gamma + i S)): the amplitude the time-local equation assigns to G.
ComplexSignal tcl_effective_amplitude(const TclCoefficients& coeffs);

Trajectory tcl_propagate(const TclCoefficients& coeffs, const QubitState& rho0);

}  // namespace qdecay

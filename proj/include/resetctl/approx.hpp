#pragma once

#include <string>

#include "resetctl/elements.hpp"

namespace resetctl {

enum class ElementKind { Gfore, Gsore, CglpFore, CglpSore };
enum class Regime { LowFreq, HighFreq };

/// One simplified-formula prediction: magnitude plus phase where defined.
struct ApproxReport {
    ElementKind kind;
    Regime regime;
    int order_n = 1;
    double magnitude = 0.0;
    bool has_phase = false;
    double phase_deg = 0.0;
    std::string formula_id; ///< content-based id, e.g. "gfore-hf-n1"
};

/// F = (4/pi) (1 - gamma) / (1 + gamma); zero iff gamma = 1.
[[nodiscard]] double factor_F(double gamma);

/// alpha = 1/sqrt(1 + F^2): unity high-frequency CgLp-FORE gain.
[[nodiscard]] double alpha_choice(double gamma);

/// kappa = 1/(1 + F^2)^(1/4): unity high-frequency CgLp-SORE gain.
[[nodiscard]] double kappa_choice(double gamma);

/// beta = 1/(2 kappa): zeroes the low-frequency SORE harmonics.
[[nodiscard]] double beta_choice(double kappa);

/**
 * Largest gamma whose asymptotic CgLp-FORE lead still reaches phi degrees:
 * gamma_max = (4/pi - tan phi) / (4/pi + tan phi). Valid for
 * 0 < phi < atan(4/pi). First-order elements only.
 */
[[nodiscard]] double gamma_max(double phi_deg);

/**
 * Low-frequency harmonic-magnitude proxy (1 - gamma) / (gain_corr * omega_r)^2.
 * Lower sigma means lower low-frequency odd harmonics; used to rank designs.
 */
[[nodiscard]] double sigma(const CgLpDesign& design);

/**
 * Simplified low/high-frequency prediction for the given element family,
 * regime and harmonic order. The design supplies gamma, omega_r, gain_corr
 * and (order 2) beta. Throws ParamError for combinations with no formula.
 */
[[nodiscard]] ApproxReport approx_eval(ElementKind kind, Regime regime, int n,
                                       const CgLpDesign& design, double omega);

} // namespace resetctl

#pragma once

#include <functional>
#include <map>
#include <vector>

#include "resetctl/elements.hpp"
#include "resetctl/numkit.hpp"

namespace resetctl {

/**
 * Simulation settings. dt = 0 or duration = 0 selects automatic values:
 * dt divides the reference period (even number of steps per period, at
 * least 200 and enough to resolve the fastest pole) and the duration
 * covers settle_periods + analysis_periods of the reference.
 */
struct SimConfig {
    double dt = 0.0;              ///< s; 0 = auto
    double duration = 0.0;        ///< s; 0 = auto
    int settle_periods = 10;      ///< discarded before analysis
    int analysis_periods = 8;     ///< >= 4 for spectral work
    double amplitude = 1.0;       ///< reference/input amplitude
    double freq_hz = 1.0;         ///< reference/input frequency
    double quantizer_step = 0.0;  ///< output quantization; 0 disables

    void validate() const;
};

/// State jump bookkeeping for one reset event. The output value and slope
/// on both sides feed the spectral jump corrections in extract_harmonics.
struct ResetEvent {
    double time = 0.0;
    std::size_t step_index = 0; ///< fixed step whose cell contains the event
    double output_before = 0.0;
    double output_after = 0.0;
    double deriv_before = 0.0;
    double deriv_after = 0.0;
};

/// Time-domain run artifacts. All series share the same uniform dt.
struct SimResult {
    Signal reference;
    Signal error;
    Signal control; ///< actuation signal (element output in open loop)
    Signal output;  ///< analysed output (element output / plant position)
    std::vector<ResetEvent> resets;
    double rms_error = 0.0; ///< over the analysis window
    double amplitude = 1.0;
    double freq_hz = 1.0;
    double settle_time = 0.0; ///< start of the analysis window, s
};

/**
 * Open-loop simulation of one reset controller driven by input(t).
 * RK4 flow integration; input sign changes are refined by bisection to
 * dt * 1e-6 and the state jump x <- A_rho x is applied at the crossing.
 * Throws DivergenceError when the state norm passes 1e12.
 */
[[nodiscard]] SimResult simulate_element(const ResetController& ctrl,
                                         const std::function<double(double)>& input,
                                         const SimConfig& cfg);

/// Sinusoidal-input convenience overload using cfg.amplitude / cfg.freq_hz.
[[nodiscard]] SimResult simulate_element(const ResetController& ctrl,
                                         const SimConfig& cfg);

/// Open-loop simulation of a series chain under cfg's sinusoidal input.
[[nodiscard]] SimResult simulate_chain(const SeriesChain& chain, const SimConfig& cfg);

/**
 * Steady-state harmonic coefficients of the simulated output at
 * n * base_f, normalized by the input amplitude so the results compare
 * directly against G_n. Jump discontinuities at the recorded reset events
 * are compensated, keeping the extraction accurate to O(dt^2).
 */
[[nodiscard]] std::map<int, Complex> extract_harmonics(const SimResult& result,
                                                       double base_f_hz,
                                                       const std::vector<int>& orders);

/// Identified stage plant G(s) = 9602.5 / (s^2 + 4.2676 s + 7627.3).
[[nodiscard]] LinearElement make_plant();

/**
 * Unity-feedback tracking simulation: e = r - y, the chain (reset element
 * plus linear elements, in order) drives the plant, and the reset element
 * fires on zero crossings of its own input e(t). The optional quantizer
 * applies to the measured feedback signal only.
 */
[[nodiscard]] SimResult simulate_closed_loop(const SeriesChain& controller,
                                             const LinearElement& plant,
                                             const SimConfig& cfg);

/// DF-predicted tracking RMS: |SF(j 2 pi f)| * amplitude / sqrt(2).
[[nodiscard]] double expected_rms_error(const SeriesChain& controller,
                                        const LinearElement& plant, double ref_amplitude,
                                        double ref_freq_hz);

/// measured / expected; infinity flag handled by the caller via exception.
[[nodiscard]] double deviation_ratio(double measured_rms, double expected_rms);

} // namespace resetctl

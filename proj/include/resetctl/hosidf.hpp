#pragma once

#include <string>
#include <vector>

#include "resetctl/elements.hpp"

namespace resetctl {

/**
 * Frequency-domain kernel matrices of a reset controller at one frequency:
 *
 *   Lambda  = w^2 I + A^2
 *   Delta   = I + e^{(pi/w) A}
 *   Delta_r = I + A_rho e^{(pi/w) A}
 *   Gamma_r = Delta_r^-1 A_rho Delta Lambda^-1
 *   Theta_D = (-2 w^2 / pi) Delta (Gamma_r - Lambda^-1)
 *
 * Theta_D is real-valued for real (A, A_rho).
 */
struct HosidfKernels {
    CMatrix lambda;
    CMatrix delta;
    CMatrix delta_r;
    CMatrix gamma_r;
    CMatrix theta_d;
};

/// Dense table of G_n over a frequency grid for a set of harmonic orders.
struct HarmonicResponse {
    std::vector<double> omega_grid;           ///< rad/s, strictly ascending
    std::vector<int> orders;
    std::vector<std::vector<Complex>> values; ///< values[i][j] = G_orders[j](omega_grid[i])

    /// Grid points where kernel evaluation failed, recorded without aborting.
    struct PointError {
        std::size_t grid_index;
        double omega;
        std::string message;
    };
    std::vector<PointError> errors;
};

/**
 * Evaluates the kernel matrices at omega > 0. Throws KernelError when
 * Delta_r or Lambda is numerically singular (the reset sequence has no
 * well-defined steady state there).
 */
[[nodiscard]] HosidfKernels kernels(const ResetController& ctrl, double omega);

/**
 * Harmonic transfer G_n(omega) of a reset controller driven by a sinusoid
 * at omega:
 *
 *   n = 1:      C (jwI - A)^-1 (I + j Theta_D) B + D
 *   odd n > 1:  C (jnwI - A)^-1 (j Theta_D) B
 *   even n:     0
 */
[[nodiscard]] Complex describing_function(const ResetController& ctrl, double omega,
                                          int n);

/**
 * n-th harmonic of a series chain with at most one reset element: the
 * reset element contributes G_n(omega), linear elements are evaluated at
 * j n omega. A purely linear chain responds only at n = 1.
 */
[[nodiscard]] Complex chain_harmonic(const SeriesChain& chain, double omega, int n);

/// First-harmonic sensitivity 1 / (1 + L1(jw)) of an open-loop chain.
[[nodiscard]] Complex sensitivity_df(const SeriesChain& open_loop, double omega);

/// Batch G_n evaluation; per-point kernel failures are recorded, not thrown.
[[nodiscard]] HarmonicResponse sweep(const SeriesChain& chain,
                                     const std::vector<double>& omega_grid,
                                     const std::vector<int>& orders);
[[nodiscard]] HarmonicResponse sweep(const ResetController& ctrl,
                                     const std::vector<double>& omega_grid,
                                     const std::vector<int>& orders);

} // namespace resetctl

#pragma once

#include <variant>
#include <vector>

#include "resetctl/numkit.hpp"

namespace resetctl {

/**
 * SISO reset controller: flow dynamics (A, B, C, D) plus the diagonal
 * reset map A_rho applied to the state at zero crossings of the input.
 * All matrices are real-valued; CMatrix is used for uniformity with the
 * frequency-domain kernels.
 */
struct ResetController {
    CMatrix A;     ///< n x n
    CMatrix B;     ///< n x 1
    CMatrix C;     ///< 1 x n
    double D = 0.0;
    CMatrix A_rho; ///< n x n diagonal, entries in [-1, 1]

    [[nodiscard]] std::size_t order() const noexcept { return A.rows(); }

    /// Checks dimensions and the reset-entry range; throws ParamError.
    void validate() const;

    /// Base-linear frequency response C (sI - A)^-1 B + D.
    [[nodiscard]] Complex base_linear_response(Complex s) const;
};

/**
 * SISO rational transfer function with real coefficients in ascending
 * powers of s. Proper or biproper for everything used in loops.
 */
struct LinearElement {
    std::vector<double> num; ///< ascending powers of s
    std::vector<double> den; ///< ascending powers of s

    void validate() const;

    [[nodiscard]] Complex eval(Complex s) const;

    /// Degree of the denominator after trailing-zero trim.
    [[nodiscard]] std::size_t den_degree() const;
    [[nodiscard]] std::size_t num_degree() const;
};

/// One tunable CgLp configuration. Frequencies in rad/s.
struct CgLpDesign {
    int order = 1;           ///< 1 (GFORE + first-order lead) or 2 (GSORE + second-order lead)
    double gamma = 0.0;      ///< reset gain, [-1, 1]
    double omega_r = 1.0;    ///< reset/lead corner, rad/s
    double omega_f = 100.0;  ///< lead low-pass corner, rad/s
    double gain_corr = 1.0;  ///< alpha (order 1) or kappa (order 2)
    double beta = 1.0;       ///< SORE damping (order 2)
    double zeta = 1.0;       ///< lead numerator damping (order 2)

    void validate() const;
};

/// Ordered series connection holding at most one reset element.
class SeriesChain {
public:
    using Element = std::variant<ResetController, LinearElement>;

    SeriesChain() = default;
    explicit SeriesChain(std::vector<Element> elements);

    void push_back(Element e);

    [[nodiscard]] const std::vector<Element>& elements() const noexcept { return elements_; }
    [[nodiscard]] bool has_reset() const noexcept { return reset_index_ >= 0; }
    /// Index of the reset element; -1 when the chain is purely linear.
    [[nodiscard]] int reset_index() const noexcept { return reset_index_; }
    [[nodiscard]] const ResetController& reset_element() const;

private:
    std::vector<Element> elements_;
    int reset_index_ = -1;
};

/// Generalized first-order reset element, corner at alpha*omega_r.
[[nodiscard]] ResetController make_gfore(double omega_r, double gamma, double alpha);

/// Generalized second-order reset element.
[[nodiscard]] ResetController make_gsore(double omega_r, double gamma, double kappa,
                                         double beta);

/// Clegg integrator: integrator state zeroed at input zero crossings.
[[nodiscard]] ResetController make_clegg();

/**
 * Linear lead filter. Order 1: (s/wr + 1)/(s/wf + 1). Order 2:
 * ((s/wr)^2 + 2 zeta s/wr + 1) / ((s/wf)^2 + 2 s/wf + 1), denominator
 * damping fixed at unity.
 */
[[nodiscard]] LinearElement make_lead(int order, double omega_r, double omega_f,
                                      double zeta = 1.0);

/// PI + first-order low pass: kp (1 + wi/s) / (s/wf + 1). Frequencies rad/s.
[[nodiscard]] LinearElement make_pid(double kp, double omega_i, double omega_f);

/// Reset element followed by the matching-order lead filter.
[[nodiscard]] SeriesChain make_cglp(const CgLpDesign& design);

} // namespace resetctl

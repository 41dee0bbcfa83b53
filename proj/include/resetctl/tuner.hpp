#pragma once

#include <string>
#include <vector>

#include "resetctl/elements.hpp"

namespace resetctl {

/**
 * One CgLp tuning problem: reach phi_target degrees of phase lead at the
 * bandwidth omega_c for every candidate gamma, then rank by sigma.
 * Frequencies in rad/s.
 *
 * The phase lead is the contribution of the reset element plus its lead
 * zero pair; the lead low-pass at omega_f is excluded while tuning (it
 * belongs to the loop's low-pass behaviour, and the gamma_max feasibility
 * law is exact only for that convention). omega_f still shapes the
 * resulting designs.
 */
struct TuningProblem {
    int order = 1;
    double phi_target_deg = 40.0;
    double omega_c = 2.0 * 3.14159265358979323846 * 100.0;
    double omega_f = 2.0 * 3.14159265358979323846 * 500.0;
    std::vector<double> gamma_candidates;
    int refinement_rounds = 0;
    double phase_tolerance_deg = 0.1;
    double zeta = 1.0; ///< lead numerator damping used for order-2 designs

    void validate() const;
};

/// One feasible tuned candidate (a row of the candidate table).
struct CandidateResult {
    double gamma = 0.0;
    double omega_r = 0.0;       ///< rad/s
    double a_ratio = 0.0;       ///< omega_c / omega_r
    double gain_corr = 1.0;     ///< alpha (order 1) or kappa (order 2)
    double beta = 0.0;          ///< order 2 only
    double zeta = 0.0;          ///< order 2 only
    double achieved_phase_deg = 0.0;
    double sigma = 0.0;
};

/// Candidate gamma rejected with its reachable asymptotic lead.
struct InfeasibleCandidate {
    double gamma = 0.0;
    double asymptote_deg = 0.0;
    std::string reason;
};

/// Full enumeration result: feasible rows sorted by ascending sigma.
struct TuningOutcome {
    std::vector<CandidateResult> candidates;
    std::vector<InfeasibleCandidate> infeasible;

    [[nodiscard]] const CandidateResult& best() const;
};

/// Exact first-harmonic phase of the design's CgLp chain at omega_c, degrees.
[[nodiscard]] double phase_at(const CgLpDesign& design, double omega_c);

/**
 * Numerically determined kappa for order-2 designs: the value (with
 * beta = 1/(2 kappa)) giving exactly unity CgLp gain in the
 * high-frequency limit. The closed-form kappa_choice rests on a
 * high-frequency approximation that is only qualitative for second-order
 * elements; this solves the exact unity-gain condition instead.
 */
[[nodiscard]] double kappa_numeric(double gamma);

/**
 * Largest omega_r whose design reaches phi_target at omega_c, found by a
 * descending scan from omega_r = 20 omega_c followed by bisection. The
 * phase lead grows as omega_r falls, so the first crossing is the
 * highest-omega_r solution. Throws InfeasibleError when even the
 * asymptote (omega_r = omega_c / 50) stays short of the target.
 */
[[nodiscard]] double find_omega_r(double gamma, const TuningProblem& problem);

/// Design assembled from a tuned (gamma, omega_r) pair with the problem's omega_f.
[[nodiscard]] CgLpDesign candidate_design(const TuningProblem& problem, double gamma,
                                          double omega_r);

/**
 * Tunes every candidate gamma and returns the table sorted by ascending
 * sigma. Infeasible candidates are reported, not dropped; throws
 * InfeasibleError only when no candidate is feasible.
 */
[[nodiscard]] TuningOutcome enumerate_candidates(const TuningProblem& problem);

/**
 * Iterative refinement: re-enumerates on uniform gamma grids centred on
 * the current best (half the previous spacing each round) until the
 * rounds are exhausted or the best sigma improves by less than 1%.
 */
[[nodiscard]] TuningOutcome refine(const TuningProblem& problem,
                                   const TuningOutcome& previous);

/**
 * Grid search for the lead damping minimizing the worst deviation of
 * |chain G1| from unity (in dB) over [omega_r/10, omega_f/2].
 * Default candidates 0.6, 0.7, ..., 1.5.
 */
[[nodiscard]] double zeta_flatness_search(const CgLpDesign& design,
                                          const std::vector<double>& candidate_zetas = {});

/// Gain kp making the first-harmonic open loop unity at omega_c.
[[nodiscard]] double normalize_loop_gain(const SeriesChain& open_loop, double omega_c);

} // namespace resetctl

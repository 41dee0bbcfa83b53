#include "resetctl/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resetctl/approx.hpp"
#include "resetctl/hosidf.hpp"

namespace resetctl {

namespace {

constexpr double kAsymptoteRatio = 50.0;   // omega_r = omega_c / 50 probes the asymptote
constexpr double kScanRatioMin = 0.01;     // omega_r scan upper end: 100 omega_c
constexpr double kScanRatioMax = 50.0;
constexpr std::size_t kScanPoints = 240;

double rad2deg(double r) { return r * 180.0 / M_PI; }

/// Design used while tuning: the lead low-pass corner pushed far out so
/// the measured phase is the reset + lead-zero contribution alone.
CgLpDesign tuning_design(const TuningProblem& problem, double gamma, double omega_r) {
    CgLpDesign d;
    d.order = problem.order;
    d.gamma = gamma;
    d.omega_r = omega_r;
    d.omega_f = 1e6 * problem.omega_c;
    if (problem.order == 1) {
        d.gain_corr = alpha_choice(gamma);
    } else {
        d.gain_corr = kappa_numeric(gamma);
        d.beta = beta_choice(d.gain_corr);
        d.zeta = problem.zeta;
    }
    return d;
}

double tuning_phase(const TuningProblem& problem, double gamma, double omega_r) {
    return phase_at(tuning_design(problem, gamma, omega_r), problem.omega_c);
}

} // namespace

void TuningProblem::validate() const {
    if (order != 1 && order != 2) {
        throw ParamError("TuningProblem: order must be 1 or 2");
    }
    if (!(phi_target_deg > 0.0)) {
        throw ParamError("TuningProblem: phase target must be positive");
    }
    if (!(omega_c > 0.0) || !(omega_f > omega_c)) {
        throw ParamError("TuningProblem: need omega_f > omega_c > 0");
    }
    if (gamma_candidates.empty()) {
        throw ParamError("TuningProblem: candidate list must not be empty");
    }
    for (double g : gamma_candidates) {
        if (g <= -1.0 || g > 1.0) {
            throw ParamError("TuningProblem: every gamma must lie in (-1, 1]");
        }
    }
    if (!(phase_tolerance_deg > 0.0)) {
        throw ParamError("TuningProblem: phase tolerance must be positive");
    }
    if (order == 2 && !(zeta > 0.0)) {
        throw ParamError("TuningProblem: zeta must be positive for order 2");
    }
}

const CandidateResult& TuningOutcome::best() const {
    if (candidates.empty()) {
        throw InfeasibleError("TuningOutcome: no feasible candidates", std::nan(""), 0.0);
    }
    return candidates.front();
}

double phase_at(const CgLpDesign& design, double omega_c) {
    const SeriesChain chain = make_cglp(design);
    const Complex g1 = chain_harmonic(chain, omega_c, 1);
    return rad2deg(std::arg(g1));
}

double kappa_numeric(double gamma) {
    if (gamma <= -1.0 || gamma > 1.0) {
        throw ParamError("kappa_numeric: gamma must lie in (-1, 1]");
    }
    // Solve |G1(w) * lead2_num(jw)| = 1 at w >> omega_r; scale-free, so
    // omega_r = 1. The gain is increasing in kappa over the bracket.
    const double w_probe = 1e3;
    auto hf_gain = [gamma, w_probe](double kappa) {
        const ResetController elem = make_gsore(1.0, gamma, kappa, beta_choice(kappa));
        const Complex g1 = describing_function(elem, w_probe, 1);
        const Complex s{0.0, w_probe};
        const Complex lead_num = s * s + 2.0 * s + 1.0;
        return std::abs(g1 * lead_num);
    };
    double lo = 0.3;
    double hi = 1.6;
    double f_lo = hf_gain(lo) - 1.0;
    double f_hi = hf_gain(hi) - 1.0;
    if (f_lo * f_hi > 0.0) {
        throw ParamError("kappa_numeric: unity-gain root not bracketed");
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = hf_gain(mid) - 1.0;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double find_omega_r(double gamma, const TuningProblem& problem) {
    problem.validate();
    if (gamma <= -1.0 || gamma > 1.0) {
        throw ParamError("find_omega_r: gamma must lie in (-1, 1]");
    }
    const double phi = problem.phi_target_deg;

    const double asymptote =
        tuning_phase(problem, gamma, problem.omega_c / kAsymptoteRatio);
    if (asymptote < phi) {
        std::ostringstream msg;
        msg << "find_omega_r: gamma = " << gamma << " reaches only " << asymptote
            << " deg asymptotically, short of the " << phi << " deg target";
        throw InfeasibleError(msg.str(), gamma, asymptote);
    }

    // Phase lead grows as omega_r falls (a = omega_c/omega_r rises). Scan a
    // log grid of a upward and bisect the first crossing; if the expected
    // monotonicity fails, rescan densely and still take the first crossing.
    auto phase_of_a = [&problem, gamma](double a) {
        return tuning_phase(problem, gamma, problem.omega_c / a);
    };

    auto first_crossing = [&phase_of_a, phi](const std::vector<double>& grid,
                                             bool* monotone) -> std::pair<double, double> {
        double prev_phase = phase_of_a(grid.front());
        *monotone = true;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double ph = phase_of_a(grid[i]);
            if (ph < prev_phase - 1e-6) {
                *monotone = false;
            }
            if (prev_phase < phi && ph >= phi) {
                return {grid[i - 1], grid[i]};
            }
            prev_phase = ph;
        }
        return {0.0, 0.0};
    };

    const std::vector<double> grid = log_grid(kScanRatioMin, kScanRatioMax, kScanPoints);
    if (phase_of_a(grid.front()) >= phi) {
        throw ParamError("find_omega_r: phase target already met at omega_r = 100 omega_c;"
                         " no bracketed crossing");
    }
    bool monotone = true;
    std::pair<double, double> bracket = first_crossing(grid, &monotone);
    if (!monotone) {
        bool dense_monotone = true;
        const std::vector<double> dense =
            log_grid(kScanRatioMin, kScanRatioMax, 2000);
        bracket = first_crossing(dense, &dense_monotone);
    }
    if (bracket.second == 0.0) {
        std::ostringstream msg;
        msg << "find_omega_r: gamma = " << gamma
            << " never crosses the target inside the scan range";
        throw InfeasibleError(msg.str(), gamma, asymptote);
    }

    double lo = bracket.first;
    double hi = bracket.second;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (phase_of_a(mid) >= phi) {
            hi = mid;
        } else {
            lo = mid;
        }
        if ((hi - lo) / hi < 1e-7) {
            break;
        }
    }
    const double a_cross = 0.5 * (lo + hi);
    return problem.omega_c / a_cross;
}

CgLpDesign candidate_design(const TuningProblem& problem, double gamma, double omega_r) {
    CgLpDesign d = tuning_design(problem, gamma, omega_r);
    d.omega_f = problem.omega_f;
    d.validate();
    return d;
}

TuningOutcome enumerate_candidates(const TuningProblem& problem) {
    problem.validate();
    TuningOutcome out;
    for (double gamma : problem.gamma_candidates) {
        try {
            const double omega_r = find_omega_r(gamma, problem);
            const CgLpDesign tuned = tuning_design(problem, gamma, omega_r);
            CandidateResult row;
            row.gamma = gamma;
            row.omega_r = omega_r;
            row.a_ratio = problem.omega_c / omega_r;
            row.gain_corr = tuned.gain_corr;
            row.beta = problem.order == 2 ? tuned.beta : 0.0;
            row.zeta = problem.order == 2 ? tuned.zeta : 0.0;
            row.achieved_phase_deg = phase_at(tuned, problem.omega_c);
            row.sigma = sigma(tuned);
            if (std::abs(row.achieved_phase_deg - problem.phi_target_deg) >
                problem.phase_tolerance_deg) {
                std::ostringstream msg;
                msg << "enumerate: achieved phase " << row.achieved_phase_deg
                    << " deg misses the target beyond the "
                    << problem.phase_tolerance_deg << " deg tolerance";
                throw Error(msg.str());
            }
            out.candidates.push_back(row);
        } catch (const InfeasibleError& err) {
            out.infeasible.push_back({gamma, err.asymptote_deg(), err.what()});
        }
    }
    if (out.candidates.empty()) {
        throw InfeasibleError("enumerate: every candidate gamma is infeasible",
                              std::nan(""), 0.0);
    }
    std::sort(out.candidates.begin(), out.candidates.end(),
              [](const CandidateResult& a, const CandidateResult& b) {
                  if (a.sigma != b.sigma) {
                      return a.sigma < b.sigma;
                  }
                  return a.gamma < b.gamma;
              });
    return out;
}

TuningOutcome refine(const TuningProblem& problem, const TuningOutcome& previous) {
    problem.validate();
    if (previous.candidates.empty()) {
        throw InfeasibleError("refine: previous enumeration holds no feasible candidate",
                              std::nan(""), 0.0);
    }
    if (problem.refinement_rounds <= 0) {
        return previous;
    }

    TuningOutcome current = previous;

    // Spacing around the incumbent best from its nearest neighbours.
    std::vector<double> gammas = problem.gamma_candidates;
    std::sort(gammas.begin(), gammas.end());
    double spacing = 0.0;
    {
        const double best_gamma = current.best().gamma;
        for (std::size_t i = 0; i + 1 < gammas.size(); ++i) {
            if (gammas[i] <= best_gamma + 1e-12 && best_gamma - 1e-12 <= gammas[i + 1]) {
                spacing = std::max(spacing, gammas[i + 1] - gammas[i]);
            }
        }
        if (spacing == 0.0 && gammas.size() >= 2) {
            spacing = gammas[1] - gammas[0];
        }
        if (spacing == 0.0) {
            spacing = 0.1;
        }
    }

    const std::size_t points = std::max<std::size_t>(3, gammas.size());
    for (int round = 0; round < problem.refinement_rounds; ++round) {
        const double centre = current.best().gamma;
        const double delta = spacing / 2.0;
        TuningProblem sub = problem;
        sub.gamma_candidates.clear();
        for (std::size_t i = 0; i < points; ++i) {
            double g = centre - delta +
                       2.0 * delta * static_cast<double>(i) /
                           static_cast<double>(points - 1);
            g = std::min(1.0, std::max(-1.0 + 1e-9, g));
            sub.gamma_candidates.push_back(g);
        }
        sub.refinement_rounds = 0;

        const TuningOutcome next = enumerate_candidates(sub);
        const double improvement =
            (current.best().sigma - next.best().sigma) / current.best().sigma;
        if (next.best().sigma < current.best().sigma) {
            current = next;
        }
        if (improvement < 0.01) {
            break;
        }
        spacing = delta;
    }
    return current;
}

double zeta_flatness_search(const CgLpDesign& design,
                            const std::vector<double>& candidate_zetas) {
    if (design.order != 2) {
        throw ParamError("zeta_flatness_search: order-2 designs only");
    }
    std::vector<double> zetas = candidate_zetas;
    if (zetas.empty()) {
        for (int i = 0; i <= 9; ++i) {
            zetas.push_back(0.6 + 0.1 * i);
        }
    }
    const std::vector<double> grid =
        log_grid(design.omega_r / 10.0, design.omega_f / 2.0, 200);

    double best_zeta = 0.0;
    double best_obj = 0.0;
    bool have_best = false;
    for (double z : zetas) {
        if (!(z > 0.0)) {
            throw ParamError("zeta_flatness_search: zeta candidates must be positive");
        }
        CgLpDesign d = design;
        d.zeta = z;
        const SeriesChain chain = make_cglp(d);
        double worst = 0.0;
        for (double w : grid) {
            const double mag = std::abs(chain_harmonic(chain, w, 1));
            worst = std::max(worst, std::abs(20.0 * std::log10(mag)));
        }
        if (!have_best || worst < best_obj) {
            best_obj = worst;
            best_zeta = z;
            have_best = true;
        }
    }
    return best_zeta;
}

double normalize_loop_gain(const SeriesChain& open_loop, double omega_c) {
    const Complex l1 = chain_harmonic(open_loop, omega_c, 1);
    const double mag = std::abs(l1);
    if (!(mag > 0.0) || !std::isfinite(mag)) {
        throw ParamError("normalize_loop_gain: open loop has no response at omega_c");
    }
    return 1.0 / mag;
}

} // namespace resetctl

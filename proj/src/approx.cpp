#include "resetctl/approx.hpp"

#include <cmath>

namespace resetctl {

double factor_F(double gamma) {
    if (gamma <= -1.0 || gamma > 1.0) {
        throw ParamError("factor_F: gamma must lie in (-1, 1]");
    }
    return 4.0 / M_PI * (1.0 - gamma) / (1.0 + gamma);
}

double alpha_choice(double gamma) {
    const double f = factor_F(gamma);
    return 1.0 / std::sqrt(1.0 + f * f);
}

double kappa_choice(double gamma) {
    const double f = factor_F(gamma);
    return 1.0 / std::pow(1.0 + f * f, 0.25);
}

double beta_choice(double kappa) {
    if (!(kappa > 0.0)) {
        throw ParamError("beta_choice: kappa must be positive");
    }
    return 1.0 / (2.0 * kappa);
}

double gamma_max(double phi_deg) {
    const double limit_deg = std::atan(4.0 / M_PI) * 180.0 / M_PI;
    if (!(phi_deg > 0.0) || !(phi_deg < limit_deg)) {
        throw InfeasibleError("gamma_max: phase target outside (0, atan(4/pi)) deg;"
                              " no gamma can provide this lead asymptotically",
                              std::nan(""), limit_deg);
    }
    const double f = std::tan(phi_deg * M_PI / 180.0);
    return (4.0 / M_PI - f) / (4.0 / M_PI + f);
}

double sigma(const CgLpDesign& design) {
    design.validate();
    const double scaled = design.gain_corr * design.omega_r;
    return (1.0 - design.gamma) / (scaled * scaled);
}

namespace {

bool is_fore(ElementKind kind) {
    return kind == ElementKind::Gfore || kind == ElementKind::CglpFore;
}

const char* kind_tag(ElementKind kind) {
    switch (kind) {
    case ElementKind::Gfore:    return "gfore";
    case ElementKind::Gsore:    return "gsore";
    case ElementKind::CglpFore: return "cglp-fore";
    case ElementKind::CglpSore: return "cglp-sore";
    }
    return "?";
}

} // namespace

ApproxReport approx_eval(ElementKind kind, Regime regime, int n,
                         const CgLpDesign& design, double omega) {
    if (n < 1 || (n > 1 && n % 2 == 0)) {
        throw ParamError("approx_eval: order must be 1 or odd > 1");
    }
    const bool fore = is_fore(kind);
    if ((fore && design.order != 1) || (!fore && design.order != 2)) {
        throw ParamError("approx_eval: element kind does not match design order");
    }
    design.validate();
    if (regime == Regime::LowFreq && omega > design.omega_r / 10.0) {
        throw ParamError("approx_eval: omega above the low-frequency regime (omega_r/10)");
    }
    if (regime == Regime::HighFreq && omega < 10.0 * design.omega_r) {
        throw ParamError("approx_eval: omega below the high-frequency regime (10 omega_r)");
    }

    const double gamma = design.gamma;
    const double f = factor_F(gamma);
    const double corr = design.gain_corr;
    const double wr = design.omega_r;
    const double corner = corr * wr;

    ApproxReport rep;
    rep.kind = kind;
    rep.regime = regime;
    rep.order_n = n;
    rep.formula_id = std::string(kind_tag(kind)) +
                     (regime == Regime::LowFreq ? "-lf-" : "-hf-") +
                     (n == 1 ? "n1" : "nk");

    if (regime == Regime::LowFreq) {
        if (n == 1) {
            rep.magnitude = 1.0;
            rep.has_phase = true;
            rep.phase_deg = 0.0;
            return rep;
        }
        if (fore) {
            rep.magnitude = 2.0 * (1.0 - gamma) / M_PI * omega * omega / (corner * corner);
        } else {
            const double shape = 4.0 * corr * corr * design.beta * design.beta - 1.0;
            rep.magnitude = std::abs(2.0 * (1.0 - gamma) / M_PI * shape * omega * omega /
                                     (corner * corner));
        }
        return rep;
    }

    // High-frequency forms. The element forms decay with omega; the CgLp
    // forms are the flat asymptotes after lead compensation.
    if (n == 1) {
        rep.has_phase = true;
        if (kind == ElementKind::Gfore) {
            rep.magnitude = std::sqrt(1.0 + f * f) * corner / omega;
            rep.phase_deg = -90.0 + std::atan(f) * 180.0 / M_PI;
        } else if (kind == ElementKind::Gsore) {
            rep.magnitude = std::sqrt(1.0 + f * f) * (corner / omega) * (corner / omega);
            rep.phase_deg = std::atan(f) * 180.0 / M_PI;
        } else if (kind == ElementKind::CglpFore) {
            rep.magnitude = corr * std::sqrt(1.0 + f * f);
            rep.phase_deg = std::atan(f) * 180.0 / M_PI;
        } else {
            rep.magnitude = corr * corr * std::sqrt(1.0 + f * f);
            rep.phase_deg = 180.0 + std::atan(f) * 180.0 / M_PI;
        }
        return rep;
    }

    const double nw = static_cast<double>(n) * omega;
    if (kind == ElementKind::Gfore) {
        rep.magnitude = f * corner / nw;
    } else if (kind == ElementKind::Gsore) {
        rep.magnitude = (corner / nw) * (corner / nw) * f;
    } else if (kind == ElementKind::CglpFore) {
        rep.magnitude = corr * f;
    } else {
        rep.magnitude = corr * corr * f;
    }
    return rep;
}

} // namespace resetctl

#include "resetctl/elements.hpp"

#include <cmath>
#include <utility>

namespace resetctl {

void ResetController::validate() const {
    const std::size_t n = A.rows();
    if (n == 0 || !A.is_square()) {
        throw ParamError("ResetController: A must be square and non-empty");
    }
    if (B.rows() != n || B.cols() != 1 || C.rows() != 1 || C.cols() != n) {
        throw ParamError("ResetController: B must be n x 1 and C 1 x n");
    }
    if (!A_rho.is_square() || A_rho.rows() != n) {
        throw ParamError("ResetController: A_rho must be n x n");
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const Complex v = A_rho(r, c);
            if (v.imag() != 0.0) {
                throw ParamError("ResetController: A_rho must be real");
            }
            if (r != c && v.real() != 0.0) {
                throw ParamError("ResetController: A_rho must be diagonal");
            }
            if (r == c && (v.real() < -1.0 || v.real() > 1.0)) {
                throw ParamError("ResetController: reset entries must lie in [-1, 1]");
            }
        }
    }
}

Complex ResetController::base_linear_response(Complex s) const {
    const std::size_t n = order();
    CMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            m(r, c) = (r == c ? s : Complex{0.0, 0.0}) - A(r, c);
        }
    }
    const CMatrix inv = mat_inv(m);
    Complex acc{0.0, 0.0};
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            acc += C(0, r) * inv(r, c) * B(c, 0);
        }
    }
    return acc + D;
}

namespace {

std::size_t trimmed_degree(const std::vector<double>& coeffs) {
    std::size_t deg = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0.0) {
            deg = i;
        }
    }
    return deg;
}

} // namespace

void LinearElement::validate() const {
    if (den.empty() || num.empty()) {
        throw ParamError("LinearElement: empty coefficient list");
    }
    bool any = false;
    for (double d : den) {
        if (d != 0.0) {
            any = true;
        }
    }
    if (!any) {
        throw ParamError("LinearElement: zero denominator");
    }
    if (num_degree() > den_degree()) {
        throw ParamError("LinearElement: improper transfer function");
    }
}

Complex LinearElement::eval(Complex s) const {
    auto horner = [s](const std::vector<double>& c) {
        Complex acc{0.0, 0.0};
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            acc = acc * s + *it;
        }
        return acc;
    };
    return horner(num) / horner(den);
}

std::size_t LinearElement::den_degree() const { return trimmed_degree(den); }
std::size_t LinearElement::num_degree() const { return trimmed_degree(num); }

void CgLpDesign::validate() const {
    if (order != 1 && order != 2) {
        throw ParamError("CgLpDesign: order must be 1 or 2");
    }
    if (gamma < -1.0 || gamma > 1.0) {
        throw ParamError("CgLpDesign: gamma must lie in [-1, 1]");
    }
    if (!(omega_r > 0.0) || !(omega_f > omega_r)) {
        throw ParamError("CgLpDesign: need omega_f > omega_r > 0");
    }
    if (!(gain_corr > 0.0)) {
        throw ParamError("CgLpDesign: gain correction must be positive");
    }
    if (order == 2 && (!(beta > 0.0) || !(zeta > 0.0))) {
        throw ParamError("CgLpDesign: beta and zeta must be positive for order 2");
    }
}

SeriesChain::SeriesChain(std::vector<Element> elements) {
    for (auto& e : elements) {
        push_back(std::move(e));
    }
}

void SeriesChain::push_back(Element e) {
    if (std::holds_alternative<ResetController>(e)) {
        if (reset_index_ >= 0) {
            throw TopologyError("SeriesChain: at most one reset element supported");
        }
        reset_index_ = static_cast<int>(elements_.size());
    }
    elements_.push_back(std::move(e));
}

const ResetController& SeriesChain::reset_element() const {
    if (reset_index_ < 0) {
        throw TopologyError("SeriesChain: no reset element present");
    }
    return std::get<ResetController>(elements_[static_cast<std::size_t>(reset_index_)]);
}

ResetController make_gfore(double omega_r, double gamma, double alpha) {
    if (!(omega_r > 0.0)) {
        throw ParamError("make_gfore: omega_r must be positive");
    }
    if (!(alpha > 0.0)) {
        throw ParamError("make_gfore: alpha must be positive");
    }
    if (gamma < -1.0 || gamma > 1.0) {
        throw ParamError("make_gfore: gamma must lie in [-1, 1]");
    }
    ResetController ctrl;
    const double p = alpha * omega_r;
    ctrl.A = CMatrix{{-p}};
    ctrl.B = CMatrix{{p}};
    ctrl.C = CMatrix{{1.0}};
    ctrl.D = 0.0;
    ctrl.A_rho = CMatrix{{gamma}};
    return ctrl;
}

ResetController make_gsore(double omega_r, double gamma, double kappa, double beta) {
    if (!(omega_r > 0.0)) {
        throw ParamError("make_gsore: omega_r must be positive");
    }
    if (!(kappa > 0.0)) {
        throw ParamError("make_gsore: kappa must be positive");
    }
    if (!(beta > 0.0)) {
        throw ParamError("make_gsore: beta must be positive");
    }
    if (gamma < -1.0 || gamma > 1.0) {
        throw ParamError("make_gsore: gamma must lie in [-1, 1]");
    }
    ResetController ctrl;
    const double kw = kappa * omega_r;
    ctrl.A = CMatrix{{0.0, 1.0}, {-kw * kw, -2.0 * beta * kappa * kappa * omega_r}};
    ctrl.B = CMatrix{{0.0}, {kw * kw}};
    ctrl.C = CMatrix{{1.0, 0.0}};
    ctrl.D = 0.0;
    ctrl.A_rho = CMatrix::diagonal({gamma, gamma});
    return ctrl;
}

ResetController make_clegg() {
    ResetController ctrl;
    ctrl.A = CMatrix{{0.0}};
    ctrl.B = CMatrix{{1.0}};
    ctrl.C = CMatrix{{1.0}};
    ctrl.D = 0.0;
    ctrl.A_rho = CMatrix{{0.0}};
    return ctrl;
}

LinearElement make_lead(int order, double omega_r, double omega_f, double zeta) {
    if (order != 1 && order != 2) {
        throw ParamError("make_lead: order must be 1 or 2");
    }
    if (!(omega_r > 0.0) || !(omega_f >= omega_r)) {
        throw ParamError("make_lead: need omega_f >= omega_r > 0");
    }
    LinearElement lead;
    if (order == 1) {
        lead.num = {1.0, 1.0 / omega_r};
        lead.den = {1.0, 1.0 / omega_f};
    } else {
        if (!(zeta > 0.0)) {
            throw ParamError("make_lead: zeta must be positive for order 2");
        }
        lead.num = {1.0, 2.0 * zeta / omega_r, 1.0 / (omega_r * omega_r)};
        lead.den = {1.0, 2.0 / omega_f, 1.0 / (omega_f * omega_f)};
    }
    return lead;
}

LinearElement make_pid(double kp, double omega_i, double omega_f) {
    if (!(kp > 0.0) || !(omega_i > 0.0) || !(omega_f > 0.0)) {
        throw ParamError("make_pid: all parameters must be positive");
    }
    // kp (1 + wi/s) / (s/wf + 1) = kp (s + wi) / (s (s/wf + 1))
    LinearElement pid;
    pid.num = {kp * omega_i, kp};
    pid.den = {0.0, 1.0, 1.0 / omega_f};
    return pid;
}

SeriesChain make_cglp(const CgLpDesign& design) {
    design.validate();
    SeriesChain chain;
    if (design.order == 1) {
        chain.push_back(make_gfore(design.omega_r, design.gamma, design.gain_corr));
        chain.push_back(make_lead(1, design.omega_r, design.omega_f));
    } else {
        chain.push_back(make_gsore(design.omega_r, design.gamma, design.gain_corr,
                                   design.beta));
        chain.push_back(make_lead(2, design.omega_r, design.omega_f, design.zeta));
    }
    return chain;
}

} // namespace resetctl

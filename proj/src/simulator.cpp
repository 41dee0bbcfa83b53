#include "resetctl/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "resetctl/hosidf.hpp"

namespace resetctl {

void SimConfig::validate() const {
    if (dt < 0.0 || duration < 0.0) {
        throw ParamError("SimConfig: dt and duration must be non-negative");
    }
    if (settle_periods < 0 || analysis_periods < 1) {
        throw ParamError("SimConfig: need settle_periods >= 0 and analysis_periods >= 1");
    }
    if (!(freq_hz > 0.0)) {
        throw ParamError("SimConfig: reference frequency must be positive");
    }
    if (amplitude < 0.0 || quantizer_step < 0.0) {
        throw ParamError("SimConfig: amplitude and quantizer step must be non-negative");
    }
}

namespace {

constexpr double kOverflowGuard = 1e12;
constexpr double kDwellBand = 1e-15;

/// Strict sign: amplitude-invariant, so scaled inputs reset identically.
int sgn(double x) {
    return (x > 0.0) - (x < 0.0);
}

struct StateSpace {
    CMatrix A;
    CMatrix B;
    CMatrix C;
    double D = 0.0;
};

/// Controllable canonical realization of a proper rational function.
StateSpace to_state_space(const LinearElement& tf) {
    tf.validate();
    const std::size_t n = tf.den_degree();
    StateSpace ss;
    if (n == 0) {
        ss.A = CMatrix::zeros(0, 0);
        ss.B = CMatrix::zeros(0, 1);
        ss.C = CMatrix::zeros(1, 0);
        ss.D = tf.num[0] / tf.den[0];
        return ss;
    }
    const double lead = tf.den[n];
    std::vector<double> a(n + 1, 0.0);
    std::vector<double> b(n + 1, 0.0);
    for (std::size_t i = 0; i <= n && i < tf.den.size(); ++i) {
        a[i] = tf.den[i] / lead;
    }
    for (std::size_t i = 0; i <= n && i < tf.num.size(); ++i) {
        b[i] = tf.num[i] / lead;
    }
    ss.A = CMatrix::zeros(n, n);
    ss.B = CMatrix::zeros(n, 1);
    ss.C = CMatrix::zeros(1, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        ss.A(i, i + 1) = 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        ss.A(n - 1, j) = -a[j];
    }
    ss.B(n - 1, 0) = 1.0;
    ss.D = b[n];
    for (std::size_t j = 0; j < n; ++j) {
        ss.C(0, j) = b[j] - ss.D * a[j];
    }
    return ss;
}

/// Magnitude of the fastest pole; exact for the 1- and 2-state blocks here.
double pole_bound(const CMatrix& A) {
    const std::size_t n = A.rows();
    if (n == 0) {
        return 0.0;
    }
    if (n == 1) {
        return std::abs(A(0, 0).real());
    }
    if (n == 2) {
        const double tr = A(0, 0).real() + A(1, 1).real();
        const double det =
            A(0, 0).real() * A(1, 1).real() - A(0, 1).real() * A(1, 0).real();
        const double disc = tr * tr - 4.0 * det;
        if (disc < 0.0) {
            return std::sqrt(std::abs(det));
        }
        const double root = std::sqrt(disc);
        return std::max(std::abs((tr + root) / 2.0), std::abs((tr - root) / 2.0));
    }
    return A.inf_norm();
}

/// Even step count per period resolving both the reference and the poles.
std::size_t auto_steps_per_period(double period, double fastest_pole,
                                  std::size_t floor_steps) {
    double needed = static_cast<double>(floor_steps);
    if (fastest_pole > 0.0) {
        needed = std::max(needed, period * fastest_pole / 0.5);
    }
    auto steps = static_cast<std::size_t>(std::ceil(needed));
    if (steps % 2 != 0) {
        ++steps;
    }
    return steps;
}

double quantize(double value, double step) {
    if (step <= 0.0) {
        return value;
    }
    return step * std::round(value / step);
}

struct Block {
    StateSpace ss;
    std::size_t offset = 0;
    bool is_reset = false;
    CMatrix a_rho;
};

struct Assembly {
    std::vector<Block> blocks;
    int reset_block = -1;
    std::size_t total_states = 0;
    double fastest_pole = 0.0;
};

Assembly assemble(const SeriesChain& chain) {
    if (chain.elements().empty()) {
        throw TopologyError("simulate: empty chain");
    }
    Assembly out;
    for (const auto& e : chain.elements()) {
        Block b;
        if (std::holds_alternative<ResetController>(e)) {
            const auto& rc = std::get<ResetController>(e);
            rc.validate();
            b.ss.A = rc.A;
            b.ss.B = rc.B;
            b.ss.C = rc.C;
            b.ss.D = rc.D;
            b.is_reset = true;
            b.a_rho = rc.A_rho;
            out.reset_block = static_cast<int>(out.blocks.size());
        } else {
            b.ss = to_state_space(std::get<LinearElement>(e));
        }
        b.offset = out.total_states;
        out.total_states += b.ss.A.rows();
        out.fastest_pole = std::max(out.fastest_pole, pole_bound(b.ss.A));
        out.blocks.push_back(std::move(b));
    }
    return out;
}

double block_output(const Block& b, const std::vector<double>& x, double u_in) {
    double acc = b.ss.D * u_in;
    for (std::size_t c = 0; c < b.ss.A.rows(); ++c) {
        acc += b.ss.C(0, c).real() * x[b.offset + c];
    }
    return acc;
}

void block_feed(const Block& b, const std::vector<double>& x, double u_in,
                std::vector<double>& dx) {
    for (std::size_t r = 0; r < b.ss.A.rows(); ++r) {
        double acc = b.ss.B(r, 0).real() * u_in;
        for (std::size_t c = 0; c < b.ss.A.rows(); ++c) {
            acc += b.ss.A(r, c).real() * x[b.offset + c];
        }
        dx[b.offset + r] = acc;
    }
}

void guard_overflow(const std::vector<double>& x, double t) {
    for (double v : x) {
        if (!std::isfinite(v) || std::abs(v) > kOverflowGuard) {
            throw DivergenceError("simulation diverged (state overflow guard)", t);
        }
    }
}

double rms_over_window(const Signal& s, double window_start) {
    const auto first = static_cast<std::size_t>(
        std::max(0.0, std::ceil(window_start / s.dt - 1e-9)));
    if (first >= s.samples.size()) {
        throw WindowError("rms: analysis window is empty");
    }
    double acc = 0.0;
    for (std::size_t k = first; k < s.samples.size(); ++k) {
        acc += s.samples[k] * s.samples[k];
    }
    return std::sqrt(acc / static_cast<double>(s.samples.size() - first));
}

/**
 * Shared fixed-step RK4 loop with bisection-refined reset events.
 * Covers the open-loop chain (no plant) and the unity-feedback loop.
 */
SimResult run_hybrid(const Assembly& chain, const std::optional<Block>& plant,
                     const std::function<double(double)>& reference,
                     const SimConfig& cfg, std::size_t floor_steps) {
    cfg.validate();
    const bool feedback = plant.has_value();
    const std::size_t total_states =
        chain.total_states + (feedback ? plant->ss.A.rows() : 0);
    const double fastest =
        std::max(chain.fastest_pole, feedback ? pole_bound(plant->ss.A) : 0.0);

    const double period = 1.0 / cfg.freq_hz;
    double dt = cfg.dt;
    if (dt <= 0.0) {
        dt = period /
             static_cast<double>(auto_steps_per_period(period, fastest, floor_steps));
    }
    double duration = cfg.duration;
    if (duration <= 0.0) {
        duration = period * static_cast<double>(cfg.settle_periods + cfg.analysis_periods);
    }
    const auto nsteps = static_cast<std::size_t>(std::llround(duration / dt));
    if (nsteps < 2) {
        throw ParamError("simulate: duration shorter than two steps");
    }

    auto plant_output = [&plant](const std::vector<double>& x) {
        double acc = 0.0;
        for (std::size_t c = 0; c < plant->ss.A.rows(); ++c) {
            acc += plant->ss.C(0, c).real() * x[plant->offset + c];
        }
        return acc;
    };

    auto chain_output = [&chain](const std::vector<double>& x, double u0) {
        double u = u0;
        for (const Block& b : chain.blocks) {
            u = block_output(b, x, u);
        }
        return u;
    };

    auto chain_drive = [&](double t, const std::vector<double>& x) {
        if (!feedback) {
            return reference(t);
        }
        return reference(t) - quantize(plant_output(x), cfg.quantizer_step);
    };

    // Input of the reset element; the reset law sees the continuous
    // (pre-quantization) error even when the quantizer is enabled.
    auto reset_input = [&](double t, const std::vector<double>& x) {
        double u = feedback ? reference(t) - plant_output(x) : reference(t);
        for (int i = 0; i < chain.reset_block; ++i) {
            u = block_output(chain.blocks[static_cast<std::size_t>(i)], x, u);
        }
        return u;
    };

    auto deriv = [&](double t, const std::vector<double>& x) {
        std::vector<double> dx(x.size(), 0.0);
        double u = chain_drive(t, x);
        for (const Block& b : chain.blocks) {
            block_feed(b, x, u, dx);
            u = block_output(b, x, u);
        }
        if (feedback) {
            block_feed(*plant, x, u, dx);
        }
        return dx;
    };

    auto rk4 = [&deriv, total_states](double t, const std::vector<double>& x, double h) {
        auto axpy = [](const std::vector<double>& v, const std::vector<double>& k,
                       double s) {
            std::vector<double> out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                out[i] = v[i] + s * k[i];
            }
            return out;
        };
        const std::vector<double> k1 = deriv(t, x);
        const std::vector<double> k2 = deriv(t + h / 2.0, axpy(x, k1, h / 2.0));
        const std::vector<double> k3 = deriv(t + h / 2.0, axpy(x, k2, h / 2.0));
        const std::vector<double> k4 = deriv(t + h, axpy(x, k3, h));
        std::vector<double> out(total_states);
        for (std::size_t i = 0; i < total_states; ++i) {
            out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        return out;
    };

    auto measured_output = [&](const std::vector<double>& x, double t) {
        if (feedback) {
            return plant_output(x);
        }
        return chain_output(x, reference(t));
    };

    // Time derivative of the measured output: the cascade is linear and
    // time-invariant, so the output map applied to (dx/dt, dr/dt) gives it.
    auto output_rate = [&](const std::vector<double>& x, double t) {
        const std::vector<double> xdot = deriv(t, x);
        if (feedback) {
            return plant_output(xdot);
        }
        const double eps = 1e-4 * dt;
        const double rdot = (reference(t + eps) - reference(t - eps)) / (2.0 * eps);
        return chain_output(xdot, rdot);
    };

    auto apply_jump = [&chain](std::vector<double>& x) {
        const Block& b = chain.blocks[static_cast<std::size_t>(chain.reset_block)];
        for (std::size_t i = 0; i < b.ss.A.rows(); ++i) {
            x[b.offset + i] *= b.a_rho(i, i).real();
        }
    };

    auto record_event = [&](double tc, std::size_t step, std::vector<double>& xc) {
        ResetEvent ev;
        ev.time = tc;
        ev.step_index = step;
        ev.output_before = measured_output(xc, tc);
        ev.deriv_before = output_rate(xc, tc);
        apply_jump(xc);
        ev.output_after = measured_output(xc, tc);
        ev.deriv_after = output_rate(xc, tc);
        return ev;
    };

    SimResult res;
    res.amplitude = cfg.amplitude;
    res.freq_hz = cfg.freq_hz;
    res.settle_time = static_cast<double>(cfg.settle_periods) * period;
    res.reference.dt = res.error.dt = res.control.dt = res.output.dt = dt;
    res.reference.samples.reserve(nsteps);
    res.error.samples.reserve(nsteps);
    res.control.samples.reserve(nsteps);
    res.output.samples.reserve(nsteps);

    std::vector<double> x(total_states, 0.0);
    const bool has_reset = chain.reset_block >= 0;
    double e_now = has_reset ? reset_input(0.0, x) : 0.0;
    int last_sign = has_reset ? sgn(e_now) : 0;
    bool in_dwell = has_reset && std::abs(e_now) < kDwellBand;

    for (std::size_t k = 0; k < nsteps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double t_next = t + dt;
        {
            const double r = reference(t);
            const double y = measured_output(x, t);
            res.reference.samples.push_back(r);
            res.error.samples.push_back(feedback ? r - y : r);
            res.control.samples.push_back(chain_output(x, chain_drive(t, x)));
            res.output.samples.push_back(y);
        }

        std::vector<double> x_next = rk4(t, x, dt);

        if (!has_reset) {
            x = std::move(x_next);
            guard_overflow(x, t_next);
            continue;
        }

        const double e_next = reset_input(t_next, x_next);

        if (in_dwell) {
            // Degenerate stretch where the input stays at zero: resets
            // stay suppressed until the input leaves the band.
            x = std::move(x_next);
            if (std::abs(e_next) >= kDwellBand) {
                in_dwell = false;
                last_sign = sgn(e_next);
            }
        } else if (std::abs(e_now) < kDwellBand && std::abs(e_next) < kDwellBand) {
            // Entering a dwell stretch: a single reset fires on entry.
            res.resets.push_back(record_event(t_next, k, x_next));
            x = std::move(x_next);
            in_dwell = true;
            last_sign = 0;
        } else if (last_sign != 0 && sgn(e_next) == -last_sign) {
            // Transversal crossing: refine by bisection. The signal
            // depends on the state, so each probe integrates from the
            // step start.
            double lo = t;
            double hi = t_next;
            std::vector<double> x_lo = x;
            for (int it = 0; it < 30; ++it) {
                const double mid = 0.5 * (lo + hi);
                std::vector<double> x_mid = rk4(lo, x_lo, mid - lo);
                if (sgn(reset_input(mid, x_mid)) == last_sign) {
                    lo = mid;
                    x_lo = std::move(x_mid);
                } else {
                    hi = mid;
                }
            }
            const double tc = 0.5 * (lo + hi);
            std::vector<double> xc = rk4(lo, x_lo, tc - lo);
            res.resets.push_back(record_event(tc, k, xc));
            x = rk4(tc, xc, t_next - tc);
            last_sign = sgn(e_next);
        } else {
            x = std::move(x_next);
            if (sgn(e_next) != 0) {
                last_sign = sgn(e_next);
            }
        }
        e_now = e_next;
        guard_overflow(x, t_next);
    }

    res.rms_error = rms_over_window(res.error, res.settle_time);
    return res;
}

} // namespace

SimResult simulate_element(const ResetController& ctrl,
                           const std::function<double(double)>& input,
                           const SimConfig& cfg) {
    SeriesChain chain;
    chain.push_back(ctrl);
    return run_hybrid(assemble(chain), std::nullopt, input, cfg, 4000);
}

SimResult simulate_element(const ResetController& ctrl, const SimConfig& cfg) {
    const double amp = cfg.amplitude;
    const double w = 2.0 * M_PI * cfg.freq_hz;
    return simulate_element(
        ctrl, [amp, w](double t) { return amp * std::sin(w * t); }, cfg);
}

SimResult simulate_chain(const SeriesChain& chain, const SimConfig& cfg) {
    // Chains carry the lead filters' direct feedthrough, which amplifies
    // the reset jumps; the denser default keeps harmonic extraction well
    // inside the 2% cross-validation contract.
    const double amp = cfg.amplitude;
    const double w = 2.0 * M_PI * cfg.freq_hz;
    return run_hybrid(
        assemble(chain), std::nullopt,
        [amp, w](double t) { return amp * std::sin(w * t); }, cfg, 8000);
}

SimResult simulate_closed_loop(const SeriesChain& controller, const LinearElement& plant,
                               const SimConfig& cfg) {
    plant.validate();
    if (plant.num_degree() >= plant.den_degree()) {
        throw ParamError("simulate_closed_loop: plant must be strictly proper");
    }
    Assembly chain = assemble(controller);
    Block plant_block;
    plant_block.ss = to_state_space(plant);
    plant_block.offset = chain.total_states;

    const double amp = cfg.amplitude;
    const double w = 2.0 * M_PI * cfg.freq_hz;
    return run_hybrid(
        chain, plant_block, [amp, w](double t) { return amp * std::sin(w * t); }, cfg,
        2000);
}

std::map<int, Complex> extract_harmonics(const SimResult& result, double base_f_hz,
                                         const std::vector<int>& orders) {
    if (!(base_f_hz > 0.0)) {
        throw WindowError("extract_harmonics: base frequency must be positive");
    }
    if (!(result.amplitude > 0.0)) {
        throw WindowError("extract_harmonics: input amplitude must be positive");
    }
    const Signal& s = result.output;
    if (s.dt <= 0.0 || s.samples.size() < 2) {
        throw WindowError("extract_harmonics: empty output signal");
    }

    const double period = 1.0 / base_f_hz;
    const auto first = static_cast<std::size_t>(
        std::max(0.0, std::ceil(result.settle_time / s.dt - 1e-9)));
    if (first >= s.samples.size()) {
        throw WindowError("extract_harmonics: settle window discards the whole signal");
    }
    const std::size_t avail = s.samples.size() - first;
    const auto whole = static_cast<std::size_t>(
        std::floor(static_cast<double>(avail) * s.dt / period + 1e-9));
    if (whole < 1) {
        throw WindowError("extract_harmonics: less than one whole base period available");
    }
    auto count = static_cast<std::size_t>(
        std::llround(static_cast<double>(whole) * period / s.dt));
    count = std::min(count, avail);

    std::map<int, Complex> out;
    for (int n : orders) {
        if (n < 1) {
            throw ParamError("extract_harmonics: orders must be >= 1");
        }
        const double w = 2.0 * M_PI * base_f_hz * static_cast<double>(n);
        double in_phase = 0.0;
        double quadrature = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            const double t = static_cast<double>(first + k) * s.dt;
            const double u = s.samples[first + k];
            in_phase += u * std::sin(w * t);
            quadrature += u * std::cos(w * t);
        }
        Complex c{in_phase, quadrature};

        // Euler-Maclaurin corrections for the jump discontinuities. With
        // F = u k(t) and a jump at fraction theta of the cell starting at
        // sample k, the periodic sum carries a bias of
        //   (theta - 1/2) [F]  +  dt (theta (1-theta)/2 - 1/12) [F']
        // per event, with [F'] = ([du/dt] - j w [u]) k(t_c). An event
        // sitting exactly on a sample affects that sample alone, so
        // node-aligned events are included by node index; this keeps a
        // crossing at the window's end (the periodic twin of one at its
        // start) from being counted twice.
        for (const ResetEvent& ev : result.resets) {
            const double pos = ev.time / s.dt;
            const auto node = static_cast<std::size_t>(std::llround(std::max(0.0, pos)));
            const bool node_aligned = std::abs(pos - std::round(pos)) < 1e-3;
            const std::size_t anchor = node_aligned ? node : ev.step_index;
            if (anchor < first || anchor >= first + count) {
                continue;
            }
            const double step_start = static_cast<double>(ev.step_index) * s.dt;
            const double theta = (ev.time - step_start) / s.dt;
            const double jump = ev.output_after - ev.output_before;
            const double slope_jump = ev.deriv_after - ev.deriv_before;
            const Complex kernel{std::sin(w * ev.time), std::cos(w * ev.time)};
            const Complex fprime_jump =
                (Complex{slope_jump, 0.0} - Complex{0.0, w} * jump) * kernel;
            c -= (theta - 0.5) * jump * kernel +
                 s.dt * (theta * (1.0 - theta) / 2.0 - 1.0 / 12.0) * fprime_jump;
        }
        c *= 2.0 / static_cast<double>(count);
        out[n] = c / result.amplitude;
    }
    return out;
}

LinearElement make_plant() {
    LinearElement plant;
    plant.num = {9602.5};
    plant.den = {7627.3, 4.2676, 1.0};
    return plant;
}

double expected_rms_error(const SeriesChain& controller, const LinearElement& plant,
                          double ref_amplitude, double ref_freq_hz) {
    if (!(ref_freq_hz > 0.0) || ref_amplitude < 0.0) {
        throw ParamError("expected_rms_error: need positive frequency and amplitude >= 0");
    }
    SeriesChain open_loop = controller;
    open_loop.push_back(plant);
    const Complex sf = sensitivity_df(open_loop, 2.0 * M_PI * ref_freq_hz);
    return std::abs(sf) * ref_amplitude / std::sqrt(2.0);
}

double deviation_ratio(double measured_rms, double expected_rms) {
    if (!(expected_rms > 0.0)) {
        throw ParamError(measured_rms > 0.0
                             ? "deviation_ratio: infinite deviation (expected RMS is zero)"
                             : "deviation_ratio: expected RMS must be positive");
    }
    return measured_rms / expected_rms;
}

} // namespace resetctl

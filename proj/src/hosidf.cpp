#include "resetctl/hosidf.hpp"

#include <cmath>

namespace resetctl {

namespace {

/// C (s I - A)^-1 M B for scalar s and an n x n weight M.
Complex sandwich(const ResetController& ctrl, Complex s, const CMatrix& weight) {
    const std::size_t n = ctrl.order();
    CMatrix resolvent(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            resolvent(r, c) = (r == c ? s : Complex{0.0, 0.0}) - ctrl.A(r, c);
        }
    }
    const CMatrix inner = mat_inv(resolvent) * weight;
    Complex acc{0.0, 0.0};
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            acc += ctrl.C(0, r) * inner(r, c) * ctrl.B(c, 0);
        }
    }
    return acc;
}

} // namespace

HosidfKernels kernels(const ResetController& ctrl, double omega) {
    if (!(omega > 0.0)) {
        throw ParamError("kernels: omega must be positive");
    }
    const std::size_t n = ctrl.order();
    const CMatrix eye = CMatrix::identity(n);

    HosidfKernels k;
    k.lambda = (omega * omega) * eye + ctrl.A * ctrl.A;
    const CMatrix e = mat_exp((M_PI / omega) * ctrl.A);
    k.delta = eye + e;
    k.delta_r = eye + ctrl.A_rho * e;

    CMatrix lambda_inv(n, n);
    try {
        lambda_inv = mat_inv(k.lambda);
    } catch (const SingularMatrixError&) {
        throw KernelError("describing function undefined: Lambda singular at omega", omega);
    }
    CMatrix delta_r_inv(n, n);
    try {
        delta_r_inv = mat_inv(k.delta_r);
    } catch (const SingularMatrixError&) {
        throw KernelError("describing function undefined: Delta_r singular at omega",
                          omega);
    }

    k.gamma_r = delta_r_inv * ctrl.A_rho * k.delta * lambda_inv;
    k.theta_d = (-2.0 * omega * omega / M_PI) * (k.delta * (k.gamma_r - lambda_inv));
    return k;
}

Complex describing_function(const ResetController& ctrl, double omega, int n) {
    if (n < 1) {
        throw ParamError("describing_function: harmonic order must be >= 1");
    }
    if (n % 2 == 0) {
        return {0.0, 0.0};
    }
    const HosidfKernels k = kernels(ctrl, omega);
    const std::size_t dim = ctrl.order();
    const Complex j{0.0, 1.0};
    const Complex s{0.0, static_cast<double>(n) * omega};

    if (n == 1) {
        const CMatrix weight = CMatrix::identity(dim) + j * k.theta_d;
        return sandwich(ctrl, s, weight) + ctrl.D;
    }
    return sandwich(ctrl, s, j * k.theta_d);
}

Complex chain_harmonic(const SeriesChain& chain, double omega, int n) {
    if (n < 1) {
        throw ParamError("chain_harmonic: harmonic order must be >= 1");
    }
    if (chain.elements().empty()) {
        throw TopologyError("chain_harmonic: empty chain");
    }
    if (!chain.has_reset()) {
        if (n > 1) {
            return {0.0, 0.0};
        }
        Complex acc{1.0, 0.0};
        for (const auto& e : chain.elements()) {
            acc *= std::get<LinearElement>(e).eval(Complex{0.0, omega});
        }
        return acc;
    }
    if (n % 2 == 0) {
        return {0.0, 0.0};
    }
    const Complex s_n{0.0, static_cast<double>(n) * omega};
    Complex acc{1.0, 0.0};
    for (const auto& e : chain.elements()) {
        if (std::holds_alternative<ResetController>(e)) {
            acc *= describing_function(std::get<ResetController>(e), omega, n);
        } else {
            acc *= std::get<LinearElement>(e).eval(s_n);
        }
    }
    return acc;
}

Complex sensitivity_df(const SeriesChain& open_loop, double omega) {
    const Complex l1 = chain_harmonic(open_loop, omega, 1);
    const Complex denom = Complex{1.0, 0.0} + l1;
    if (std::abs(denom) < 1e-12) {
        throw MarginalLoopError("sensitivity_df: open loop at the critical point -1");
    }
    return Complex{1.0, 0.0} / denom;
}

namespace {

template <typename Evaluator>
HarmonicResponse sweep_impl(const std::vector<double>& omega_grid,
                            const std::vector<int>& orders, Evaluator evaluate) {
    if (omega_grid.empty()) {
        throw ParamError("sweep: empty frequency grid");
    }
    for (std::size_t i = 0; i + 1 < omega_grid.size(); ++i) {
        if (!(omega_grid[i] < omega_grid[i + 1])) {
            throw ParamError("sweep: grid must be strictly ascending");
        }
    }
    HarmonicResponse resp;
    resp.omega_grid = omega_grid;
    resp.orders = orders;
    resp.values.assign(omega_grid.size(),
                       std::vector<Complex>(orders.size(), Complex{0.0, 0.0}));
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        for (std::size_t jj = 0; jj < orders.size(); ++jj) {
            try {
                resp.values[i][jj] = evaluate(omega_grid[i], orders[jj]);
            } catch (const Error& err) {
                resp.errors.push_back({i, omega_grid[i], err.what()});
            }
        }
    }
    return resp;
}

} // namespace

HarmonicResponse sweep(const SeriesChain& chain, const std::vector<double>& omega_grid,
                       const std::vector<int>& orders) {
    return sweep_impl(omega_grid, orders, [&chain](double w, int n) {
        return chain_harmonic(chain, w, n);
    });
}

HarmonicResponse sweep(const ResetController& ctrl, const std::vector<double>& omega_grid,
                       const std::vector<int>& orders) {
    return sweep_impl(omega_grid, orders, [&ctrl](double w, int n) {
        return describing_function(ctrl, w, n);
    });
}

} // namespace resetctl

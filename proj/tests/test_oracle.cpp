// Cross-validation of the two independent routes to G_n: the analytic
// kernel formula versus harmonics extracted from time-domain simulation.
// This is the central correctness property of the whole library.

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "resetctl/approx.hpp"
#include "resetctl/hosidf.hpp"
#include "resetctl/simulator.hpp"
#include "resetctl/tuner.hpp"

using namespace resetctl;

namespace {

struct OracleCase {
    std::string name;
    SeriesChain chain;
};

std::vector<OracleCase> oracle_cases() {
    std::vector<OracleCase> cases;
    {
        SeriesChain c;
        c.push_back(make_clegg());
        cases.push_back({"clegg", std::move(c)});
    }
    for (double gamma : {-0.3, 0.0, 0.3}) {
        SeriesChain c;
        c.push_back(make_gfore(1.0, gamma, alpha_choice(gamma)));
        cases.push_back({"gfore " + std::to_string(gamma), std::move(c)});
    }
    for (double gamma : {0.0, 0.2}) {
        const double kappa = kappa_choice(gamma);
        SeriesChain c;
        c.push_back(make_gsore(1.0, gamma, kappa, beta_choice(kappa)));
        cases.push_back({"gsore " + std::to_string(gamma), std::move(c)});
    }
    {
        CgLpDesign d;
        d.order = 1;
        d.gamma = 0.0;
        d.omega_r = 1.0;
        d.omega_f = 20.0;
        d.gain_corr = alpha_choice(0.0);
        cases.push_back({"cglp-fore", make_cglp(d)});
    }
    {
        CgLpDesign d;
        d.order = 2;
        d.gamma = 0.2;
        d.omega_r = 1.0;
        d.omega_f = 20.0;
        d.gain_corr = kappa_numeric(0.2);
        d.beta = beta_choice(d.gain_corr);
        d.zeta = 1.0;
        cases.push_back({"cglp-sore", make_cglp(d)});
    }
    return cases;
}

} // namespace

TEST_SUITE("oracle") {

TEST_CASE("analytic and simulated harmonics agree to 2% / 2 deg") {
    const auto cases = oracle_cases();
    const std::vector<double> omegas = log_grid(0.1, 10.0, 5);

    for (const auto& oc : cases) {
        CAPTURE(oc.name);
        for (double omega : omegas) {
            CAPTURE(omega);
            SimConfig cfg;
            cfg.freq_hz = omega / (2.0 * M_PI);
            cfg.settle_periods = 12;
            cfg.analysis_periods = 8;
            const SimResult run = simulate_chain(oc.chain, cfg);
            const auto extracted =
                extract_harmonics(run, cfg.freq_hz, {1, 2, 3, 4, 5});

            for (int n : {1, 3, 5}) {
                const Complex ana = chain_harmonic(oc.chain, omega, n);
                const Complex sim = extracted.at(n);
                const double mag_ana = std::abs(ana);
                if (mag_ana <= 1e-8) {
                    continue;
                }
                CAPTURE(n);
                CHECK(std::abs(std::abs(sim) - mag_ana) / mag_ana < 0.02);
                CHECK(std::abs(std::arg(sim / ana)) * 180.0 / M_PI < 2.0);
            }
            for (int n : {2, 4}) {
                CHECK(std::abs(extracted.at(n)) < 1e-6);
            }
        }
    }
}

TEST_CASE("oracle agreement holds for randomly drawn designs") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> gamma_dist(-0.4, 0.4);
    std::uniform_real_distribution<double> ratio_dist(0.3, 3.0);
    for (int trial = 0; trial < 6; ++trial) {
        const int order = trial % 2 == 0 ? 1 : 2;
        const double gamma = gamma_dist(rng);
        const double omega = ratio_dist(rng);
        CAPTURE(order);
        CAPTURE(gamma);
        CAPTURE(omega);

        SeriesChain chain;
        if (order == 1) {
            chain.push_back(make_gfore(1.0, gamma, alpha_choice(gamma)));
        } else {
            const double kappa = kappa_choice(gamma);
            chain.push_back(make_gsore(1.0, gamma, kappa, beta_choice(kappa)));
        }

        SimConfig cfg;
        cfg.freq_hz = omega / (2.0 * M_PI);
        cfg.settle_periods = 12;
        cfg.analysis_periods = 8;
        const auto extracted =
            extract_harmonics(simulate_chain(chain, cfg), cfg.freq_hz, {1, 2, 3, 5});

        for (int n : {1, 3, 5}) {
            const Complex ana = chain_harmonic(chain, omega, n);
            if (std::abs(ana) <= 1e-8) {
                continue;
            }
            CAPTURE(n);
            CHECK(std::abs(std::abs(extracted.at(n)) - std::abs(ana)) / std::abs(ana) <
                  0.02);
            CHECK(std::abs(std::arg(extracted.at(n) / ana)) * 180.0 / M_PI < 2.0);
        }
        CHECK(std::abs(extracted.at(2)) < 1e-6);
    }
}

TEST_CASE("simulated harmonics are reproducible run to run") {
    SeriesChain chain;
    chain.push_back(make_gfore(1.0, 0.0, alpha_choice(0.0)));
    SimConfig cfg;
    cfg.freq_hz = 1.0 / (2.0 * M_PI);
    cfg.settle_periods = 4;
    cfg.analysis_periods = 4;
    const auto a = extract_harmonics(simulate_chain(chain, cfg), cfg.freq_hz, {1, 3});
    const auto b = extract_harmonics(simulate_chain(chain, cfg), cfg.freq_hz, {1, 3});
    CHECK(a.at(1).real() == b.at(1).real());
    CHECK(a.at(1).imag() == b.at(1).imag());
    CHECK(a.at(3).real() == b.at(3).real());
}

} // TEST_SUITE

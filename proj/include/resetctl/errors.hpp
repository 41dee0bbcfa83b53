#pragma once

#include <stdexcept>
#include <string>

namespace resetctl {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter outside its documented domain (gamma out of [-1,1], etc).
class ParamError : public Error {
public:
    using Error::Error;
};

/// Matrix dimension mismatch or non-square input where square is required.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Matrix is singular or numerically too ill-conditioned to invert.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& msg, double rcond)
        : Error(msg), rcond_(rcond) {}

    [[nodiscard]] double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

/// Describing function undefined at a frequency (Delta_r or Lambda singular).
class KernelError : public Error {
public:
    KernelError(const std::string& msg, double omega)
        : Error(msg), omega_(omega) {}

    [[nodiscard]] double omega() const noexcept { return omega_; }

private:
    double omega_;
};

/// Analysis window too short or misconfigured for spectral extraction.
class WindowError : public Error {
public:
    using Error::Error;
};

/// Series chain topology not supported (more than one reset element).
class TopologyError : public Error {
public:
    using Error::Error;
};

/// No omega_r can reach the requested phase lead for this gamma.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& msg, double gamma, double asymptote_deg)
        : Error(msg), gamma_(gamma), asymptote_deg_(asymptote_deg) {}

    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] double asymptote_deg() const noexcept { return asymptote_deg_; }

private:
    double gamma_;
    double asymptote_deg_;
};

/// Simulation state exceeded the overflow guard.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& msg, double last_stable_time)
        : Error(msg), last_stable_time_(last_stable_time) {}

    [[nodiscard]] double last_stable_time() const noexcept { return last_stable_time_; }

private:
    double last_stable_time_;
};

/// First-harmonic open loop is at the critical point L = -1.
class MarginalLoopError : public Error {
public:
    using Error::Error;
};

/// Config file parse or validation failure (carries field diagnostics).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace resetctl

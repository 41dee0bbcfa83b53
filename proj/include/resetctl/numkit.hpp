#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "resetctl/errors.hpp"

namespace resetctl {

using Complex = std::complex<double>;

/**
 * Dense complex matrix sized for controller state spaces (n <= 4 in
 * practice). Row-major storage, value semantics, dimension-checked
 * arithmetic. Not a general linear algebra library by intent.
 */
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::initializer_list<std::initializer_list<Complex>> init);

    [[nodiscard]] static CMatrix identity(std::size_t n);
    [[nodiscard]] static CMatrix zeros(std::size_t rows, std::size_t cols);
    /// n x n diagonal matrix from the given entries.
    [[nodiscard]] static CMatrix diagonal(const std::vector<Complex>& entries);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] CMatrix operator+(const CMatrix& rhs) const;
    [[nodiscard]] CMatrix operator-(const CMatrix& rhs) const;
    [[nodiscard]] CMatrix operator*(const CMatrix& rhs) const;
    [[nodiscard]] CMatrix operator*(Complex scalar) const;
    [[nodiscard]] CMatrix operator-() const;

    /// Largest componentwise |entry|.
    [[nodiscard]] double max_abs() const;
    /// Infinity norm (maximum absolute row sum).
    [[nodiscard]] double inf_norm() const;
    /// True if every entry is finite.
    [[nodiscard]] bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

[[nodiscard]] CMatrix operator*(Complex scalar, const CMatrix& m);
[[nodiscard]] CMatrix operator*(double scalar, const CMatrix& m);

/**
 * Matrix exponential by scaling-and-squaring with a (6,6) Pade core.
 * Relative accuracy ~1e-13 for the norms seen here (||M|| up to ~50).
 * Throws DimensionError for non-square and ParamError for non-finite input.
 */
[[nodiscard]] CMatrix mat_exp(const CMatrix& m);

/**
 * Inverse by Gauss-Jordan elimination with partial pivoting.
 * Declares the matrix singular (SingularMatrixError) when the reciprocal
 * condition estimate ||M||_inf * ||M^-1||_inf falls below 1e-12.
 */
[[nodiscard]] CMatrix mat_inv(const CMatrix& m);

/// Uniformly sampled real signal. dt in seconds.
struct Signal {
    double dt = 0.0;
    std::vector<double> samples;
};

/**
 * Single-bin correlation at frequency f over the largest whole number of
 * periods available after discarding the first `skip` seconds.
 *
 * Amplitude convention: the returned coefficient c reconstructs the
 * component at f as |c| * sin(2*pi*f*t + arg c), with t the absolute
 * sample time. Exact (no leakage) when the window holds an integer number
 * of periods of every component present.
 */
[[nodiscard]] Complex single_bin_dft(const Signal& s, double f_hz, double skip_s);

/// Log-spaced grid of `points` values from lo to hi inclusive (lo, hi > 0).
[[nodiscard]] std::vector<double> log_grid(double lo, double hi, std::size_t points);

} // namespace resetctl

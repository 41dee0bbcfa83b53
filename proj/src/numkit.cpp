#include "resetctl/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace resetctl {

namespace {

void check_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch");
    }
}

} // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
        if (row.size() != cols_) {
            throw DimensionError("CMatrix: ragged initializer");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CMatrix CMatrix::zeros(std::size_t rows, std::size_t cols) {
    return CMatrix(rows, cols);
}

CMatrix CMatrix::diagonal(const std::vector<Complex>& entries) {
    CMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, i) = entries[i];
    }
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
    check_same_shape(*this, rhs, "operator+");
    CMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        out.data_[i] += rhs.data_[i];
    }
    return out;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
    check_same_shape(*this, rhs, "operator-");
    CMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        out.data_[i] -= rhs.data_[i];
    }
    return out;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw DimensionError("operator*: inner dimensions differ");
    }
    CMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex a = (*this)(r, k);
            if (a == Complex{0.0, 0.0}) {
                continue;
            }
            for (std::size_t c = 0; c < rhs.cols_; ++c) {
                out(r, c) += a * rhs(k, c);
            }
        }
    }
    return out;
}

CMatrix CMatrix::operator*(Complex scalar) const {
    CMatrix out = *this;
    for (auto& v : out.data_) {
        v *= scalar;
    }
    return out;
}

CMatrix CMatrix::operator-() const {
    return *this * Complex{-1.0, 0.0};
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double CMatrix::inf_norm() const {
    double norm = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        double row_sum = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) {
            row_sum += std::abs((*this)(r, c));
        }
        norm = std::max(norm, row_sum);
    }
    return norm;
}

bool CMatrix::all_finite() const {
    for (const auto& v : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            return false;
        }
    }
    return true;
}

CMatrix operator*(Complex scalar, const CMatrix& m) { return m * scalar; }
CMatrix operator*(double scalar, const CMatrix& m) { return m * Complex{scalar, 0.0}; }

CMatrix mat_exp(const CMatrix& m) {
    if (!m.is_square()) {
        throw DimensionError("mat_exp: matrix must be square");
    }
    if (!m.all_finite()) {
        throw ParamError("mat_exp: non-finite entries");
    }
    const std::size_t n = m.rows();

    // Scale so ||A/2^s|| <= 0.5, apply the (6,6) Pade approximant, square back.
    int s = 0;
    double norm = m.inf_norm();
    while (norm > 0.5) {
        norm *= 0.5;
        ++s;
    }
    const CMatrix a = m * (1.0 / std::ldexp(1.0, s));

    // Pade(6,6) coefficients b_k = (12-k)! 6! / (12! k! (6-k)!).
    constexpr double b[7] = {1.0,        1.0 / 2.0,     5.0 / 44.0, 1.0 / 66.0,
                             1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};

    const CMatrix eye = CMatrix::identity(n);
    const CMatrix a2 = a * a;
    const CMatrix a4 = a2 * a2;
    const CMatrix a6 = a4 * a2;

    const CMatrix even = b[0] * eye + b[2] * a2 + b[4] * a4 + b[6] * a6;
    const CMatrix odd = a * (b[1] * eye + b[3] * a2 + b[5] * a4);

    CMatrix result = mat_inv(even - odd) * (even + odd);
    for (int i = 0; i < s; ++i) {
        result = result * result;
    }
    return result;
}

CMatrix mat_inv(const CMatrix& m) {
    if (!m.is_square()) {
        throw DimensionError("mat_inv: matrix must be square");
    }
    const std::size_t n = m.rows();
    const double norm_m = m.inf_norm();

    CMatrix a = m;
    CMatrix inv = CMatrix::identity(n);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) {
            throw SingularMatrixError("mat_inv: exactly singular matrix", 0.0);
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a(col, c), a(pivot, c));
                std::swap(inv(col, c), inv(pivot, c));
            }
        }
        const Complex d = a(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            a(col, c) /= d;
            inv(col, c) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) {
                continue;
            }
            const Complex f = a(r, col);
            if (f == Complex{0.0, 0.0}) {
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }

    const double rcond = 1.0 / (norm_m * inv.inf_norm());
    if (!(rcond >= 1e-12)) {
        throw SingularMatrixError("mat_inv: reciprocal condition below 1e-12", rcond);
    }
    return inv;
}

Complex single_bin_dft(const Signal& s, double f_hz, double skip_s) {
    if (f_hz <= 0.0) {
        throw WindowError("single_bin_dft: frequency must be positive");
    }
    if (s.dt <= 0.0 || s.samples.size() < 2) {
        throw WindowError("single_bin_dft: signal needs dt > 0 and at least 2 samples");
    }
    const double period = 1.0 / f_hz;
    const auto first = static_cast<std::size_t>(
        std::max(0.0, std::ceil(skip_s / s.dt - 1e-9)));
    if (first >= s.samples.size()) {
        throw WindowError("single_bin_dft: skip discards the whole signal");
    }
    const std::size_t avail = s.samples.size() - first;
    const auto whole_periods = static_cast<std::size_t>(
        std::floor(static_cast<double>(avail) * s.dt / period + 1e-9));
    if (whole_periods < 1) {
        throw WindowError("single_bin_dft: window shorter than one period");
    }
    auto count = static_cast<std::size_t>(
        std::llround(static_cast<double>(whole_periods) * period / s.dt));
    count = std::min(count, avail);

    const double w = 2.0 * M_PI * f_hz;
    double in_phase = 0.0;
    double quadrature = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(first + k) * s.dt;
        const double u = s.samples[first + k];
        in_phase += u * std::sin(w * t);
        quadrature += u * std::cos(w * t);
    }
    const double scale = 2.0 / static_cast<double>(count);
    return {scale * in_phase, scale * quadrature};
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (lo <= 0.0 || hi <= lo || points < 2) {
        throw ParamError("log_grid: need 0 < lo < hi and at least 2 points");
    }
    std::vector<double> grid(points);
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = lo * std::exp(step * static_cast<double>(i));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

} // namespace resetctl

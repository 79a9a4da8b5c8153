#pragma once

#include <cstddef>
#include <vector>

#include "tvr/errors.hpp"

namespace tvr {

// Small dense row-major matrix; desk-scale dimensions only.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Matrix diagonal(const std::vector<double>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return a_.empty(); }

    const std::vector<double>& data() const { return a_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

// Lower-triangular factor L with A = L L^T; throws ConfigError if not SPD.
Matrix cholesky(const Matrix& a);

// Solve L y = b in place (forward substitution).
void solve_lower_inplace(const Matrix& lower, std::vector<double>& b);

// Solve (L L^T) x = b given the Cholesky factor.
std::vector<double> solve_spd(const Matrix& lower, std::vector<double> b);

std::vector<double> matvec(const Matrix& a, const std::vector<double>& v);

// v^T A v
double quad_form(const Matrix& a, const std::vector<double>& v);

double log_det_from_cholesky(const Matrix& lower);

} // namespace tvr

#include "tvr/linalg.hpp"

#include <cmath>

namespace tvr {

Matrix cholesky(const Matrix& a) {
    if (a.rows() != a.cols()) throw ContractViolation("cholesky: matrix not square");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw ConfigError("cholesky: matrix not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

void solve_lower_inplace(const Matrix& lower, std::vector<double>& b) {
    const std::size_t n = lower.rows();
    if (b.size() != n) throw ContractViolation("solve_lower: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * b[k];
        b[i] = s / lower(i, i);
    }
}

std::vector<double> solve_spd(const Matrix& lower, std::vector<double> b) {
    const std::size_t n = lower.rows();
    solve_lower_inplace(lower, b);
    // back substitution with L^T
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower(k, ii) * b[k];
        b[ii] = s / lower(ii, ii);
    }
    return b;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& v) {
    if (a.cols() != v.size()) throw ContractViolation("matvec: size mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

double quad_form(const Matrix& a, const std::vector<double>& v) {
    if (a.rows() != v.size() || a.cols() != v.size())
        throw ContractViolation("quad_form: size mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double row = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) row += a(i, j) * v[j];
        s += v[i] * row;
    }
    return s;
}

double log_det_from_cholesky(const Matrix& lower) {
    double s = 0;
    for (std::size_t i = 0; i < lower.rows(); ++i) s += std::log(lower(i, i));
    return 2.0 * s;
}

} // namespace tvr

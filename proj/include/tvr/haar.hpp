#pragma once

#include <cstddef>
#include <vector>

namespace tvr::haar {

// Detail coefficients are stored level-major for l = 0..max_level,
// 2^l entries per level: flat index = 2^l - 1 + k.

inline std::size_t coeff_count(int max_level) {
    return (std::size_t{1} << (max_level + 1)) - 1;
}

inline std::size_t cell_count(int max_level) {
    return std::size_t{1} << (max_level + 1);
}

inline std::size_t flat_index(int level, std::size_t k) {
    return (std::size_t{1} << level) - 1 + k;
}

// max_level from a coefficient array length (2^{L+1}-1); -1 if not of that form.
int max_level_for_count(std::size_t count);

double psi(int level, std::size_t k, double x);

// Piecewise-constant values of base + sum f_lk psi_lk on the 2^{L+1} dyadic cells.
std::vector<double> cells_from_details(const std::vector<double>& details,
                                       int max_level, double base);

// Inverse transform; the cell mean (base) is dropped.
std::vector<double> details_from_cells(const std::vector<double>& cells);

// sup_l,k 2^{l(1/2+beta)} |f_lk| <= M  (smoothness-class membership)
bool holder_bounded(const std::vector<double>& details, int max_level,
                    double beta, double m_radius);

// sum_l 2^{l/2} max_k |a_lk - b_lk|: the wavelet sup-norm surrogate.
double sup_norm_bound(const std::vector<double>& a, const std::vector<double>& b);

} // namespace tvr::haar

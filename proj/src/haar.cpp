#include "tvr/haar.hpp"

#include <cmath>

#include "tvr/errors.hpp"

namespace tvr::haar {

int max_level_for_count(std::size_t count) {
    std::size_t n = count + 1;
    if (n < 2 || (n & (n - 1)) != 0) return -1;
    int l = -1;
    while (n > 1) {
        n >>= 1;
        ++l;
    }
    return l; // count = 2^{L+1}-1 gives levels 0..L
}

double psi(int level, std::size_t k, double x) {
    double scaled = std::ldexp(x, level) - static_cast<double>(k);
    if (scaled < 0.0 || scaled >= 1.0) return 0.0;
    double amp = std::sqrt(std::ldexp(1.0, level));
    return scaled < 0.5 ? amp : -amp;
}

std::vector<double> cells_from_details(const std::vector<double>& details,
                                       int max_level, double base) {
    if (details.size() != coeff_count(max_level))
        throw ContractViolation("haar: coefficient count does not match level");
    std::vector<double> vals{base};
    for (int l = 0; l <= max_level; ++l) {
        std::vector<double> next(vals.size() * 2);
        double amp = std::sqrt(std::ldexp(1.0, l));
        for (std::size_t k = 0; k < vals.size(); ++k) {
            double c = details[flat_index(l, k)] * amp;
            next[2 * k] = vals[k] + c;
            next[2 * k + 1] = vals[k] - c;
        }
        vals.swap(next);
    }
    return vals;
}

std::vector<double> details_from_cells(const std::vector<double>& cells) {
    int max_level = max_level_for_count(cells.size() - 1);
    if (max_level < 0) throw ContractViolation("haar: cell count must be a power of two");
    std::vector<double> details(coeff_count(max_level), 0.0);
    std::vector<double> vals = cells;
    for (int l = max_level; l >= 0; --l) {
        std::vector<double> prev(vals.size() / 2);
        double amp = std::sqrt(std::ldexp(1.0, l));
        for (std::size_t k = 0; k < prev.size(); ++k) {
            prev[k] = 0.5 * (vals[2 * k] + vals[2 * k + 1]);
            details[flat_index(l, k)] = 0.5 * (vals[2 * k] - vals[2 * k + 1]) / amp;
        }
        vals.swap(prev);
    }
    return details;
}

bool holder_bounded(const std::vector<double>& details, int max_level,
                    double beta, double m_radius) {
    const double cap = m_radius * (1.0 + 1e-12); // boundary values count as inside
    for (int l = 0; l <= max_level; ++l) {
        double scale = std::pow(2.0, l * (0.5 + beta));
        std::size_t width = std::size_t{1} << l;
        for (std::size_t k = 0; k < width; ++k) {
            if (scale * std::abs(details[flat_index(l, k)]) > cap) return false;
        }
    }
    return true;
}

double sup_norm_bound(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw ContractViolation("sup_norm_bound: coefficient count mismatch");
    int max_level = max_level_for_count(a.size());
    if (max_level < 0) throw ContractViolation("sup_norm_bound: bad coefficient count");
    double total = 0;
    for (int l = 0; l <= max_level; ++l) {
        double worst = 0;
        std::size_t width = std::size_t{1} << l;
        for (std::size_t k = 0; k < width; ++k) {
            double d = std::abs(a[flat_index(l, k)] - b[flat_index(l, k)]);
            if (d > worst) worst = d;
        }
        total += std::sqrt(std::ldexp(1.0, l)) * worst;
    }
    return total;
}

} // namespace tvr::haar

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tvr/errors.hpp"

namespace tvr {

inline double normal_pdf(double x) {
    return 0.3989422804014326779399461 * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244008444);
}

// Acklam's rational approximation followed by one Halley step; good to ~1e-15.
double normal_quantile(double p);

// Even count averages the two central order statistics.
inline double median(std::vector<double> v) {
    if (v.empty()) throw ContractViolation("median of empty vector");
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + m, v.end());
    if (v.size() % 2 == 1) return v[m];
    double hi = v[m];
    double lo = *std::max_element(v.begin(), v.begin() + m);
    return 0.5 * (lo + hi);
}

// Linear interpolation between order statistics (the common "type 7" rule).
inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw ContractViolation("quantile of empty vector");
    std::sort(v.begin(), v.end());
    if (q <= 0) return v.front();
    if (q >= 1) return v.back();
    double pos = q * static_cast<double>(v.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw ContractViolation("mean of empty vector");
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Least-squares slope and intercept of y on x.
struct LineFit {
    double slope = 0;
    double intercept = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace tvr

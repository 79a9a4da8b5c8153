#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "tvr/nets.hpp"

namespace tvr {

// Per-family loss record; inapplicable entries stay NaN.
//   tv            all families
//   l1            haar-density: |f - g|_1 (= 2 TV)
//   param_sq      squared l2 / Frobenius distance between parameters
//   prediction_sq |Sigma^{1/2}(theta - theta')|^2 (regression families)
//   sup_seq       sum_l 2^{l/2} max_k |df_lk| (sequence models; the wavelet
//                 sup-norm surrogate, an exact upper bound for Haar)
struct LossRecord {
    double tv = std::numeric_limits<double>::quiet_NaN();
    double l1 = std::numeric_limits<double>::quiet_NaN();
    double param_sq = std::numeric_limits<double>::quiet_NaN();
    double prediction_sq = std::numeric_limits<double>::quiet_NaN();
    double sup_seq = std::numeric_limits<double>::quiet_NaN();
};

enum class LossKind { Tv, L1, ParamSq, PredictionSq, SupSeq };

LossRecord losses(const Model& estimate, const Model& truth);
double loss_component(const LossRecord& rec, LossKind kind);

// ---------------------------------------------------------------------------
// Parameter spaces for net construction
// ---------------------------------------------------------------------------

// Equispaced 1-D Gaussian means on [lo, hi] with noise sd sigma.
ParameterSpace gaussian_location_interval(double lo, double hi, std::size_t count,
                                          double sigma = 1.0);

// Theta(s, M, sigma, kappa): |supp| <= s, |theta| <= M sigma / kappa.
struct SparseRegressionSpec {
    std::size_t dim = 4;      // p
    std::size_t sparsity = 1; // s
    double radius = 1.0;      // M
    double sigma = 1.0;
    double kappa = 1.0;
    double kappa_upper = 1.0;
    Matrix design_cov;                     // defaults to identity
    std::vector<double> value_grid{0.2, 0.4}; // +- magnitudes per coordinate
};
ParameterSpace sparse_regression_space(const SparseRegressionSpec& spec);

// A(r, M, sigma, kappa): rank <= r, Frobenius norm <= M sigma / kappa.
struct LowRankSpec {
    std::size_t rows = 2, cols = 2, rank = 1;
    double radius = 1.0;
    double sigma = 1.0;
    double kappa = 1.0;
    double kappa_upper = 1.0;
    Matrix design_cov; // covariance of vec(X); defaults to identity
};
ParameterSpace low_rank_space(const LowRankSpec& spec);

// Smoothness class members: quantized coefficients inside the |f_lk| <=
// M 2^{-l(1/2+beta)} box.  Density candidates are clipped to nonnegativity,
// renormalized, and re-checked against the coefficient bound.
struct HaarDensitySpec {
    double beta = 1.0;
    double radius = 1.0; // M
    int max_level = 1;
    double quant = 0.02; // coefficient quantization step
};
ParameterSpace haar_density_space(const HaarDensitySpec& spec);

struct WhiteNoiseSpec {
    double beta = 1.0;
    double radius = 1.0;
    int max_level = 2;
    double quant = 0.02;
};
ParameterSpace white_noise_space(const WhiteNoiseSpec& spec);

// Monte Carlo spot checks of the eigenvalue-style conditions on random
// sparse directions / low-rank matrices; return the observed extrema of
// |Sigma^{1/2} v| / |v|.
std::pair<double, double> sparse_eigenvalue_range(const Matrix& cov,
                                                  std::size_t support_size,
                                                  int trials, std::uint64_t seed);
std::pair<double, double> restricted_isometry_range(const Matrix& cov,
                                                    std::size_t rows, std::size_t cols,
                                                    std::size_t rank, int trials,
                                                    std::uint64_t seed);

// ---------------------------------------------------------------------------
// Median wavelet estimator (white-noise sequence model)
// ---------------------------------------------------------------------------

// Largest L with 2^L <= (log n / n  v  eps^2)^{-1/(2 beta + 1)}.
int wavelet_truncation_level(double beta, double eps, std::size_t n);

// Coordinate-wise sample median up to the truncation level, zero above it.
// Requires eps < 1/4, n >= 2, and data resolution at least the truncation
// level.  The returned model keeps the data's resolution.
Model median_wavelet_estimator(const EmpiricalMeasure& data, double beta, double eps);

// Non-robust counterpart (coordinate-wise mean, same truncation): baseline.
Model mean_wavelet_estimator(const EmpiricalMeasure& data, double beta, double eps);

// ---------------------------------------------------------------------------
// Modulus of continuity
// ---------------------------------------------------------------------------

struct ModulusResult {
    double value = 0.0;
    bool feasible = false; // false: no distinct pair satisfied the TV constraint
    std::size_t i = 0, j = 0;
};

// Largest loss over distinct net pairs with TV <= eps/(1-eps).
ModulusResult modulus_of_continuity(const CoveringNet& net, double eps, LossKind kind);

// Closed form, 1-D Gaussian location with noise sd sigma, squared l2 loss:
// invert TV = 2 Phi(gap/(2 sigma)) - 1 at eps/(1-eps).
double modulus_gaussian_location(double eps, double sigma = 1.0);

// Extremal white-noise pair: f1 = 0 and f2 = eps * psi_{lbar,1} with lbar the
// greatest level keeping f2 in the class; realizes sup-loss eps * 2^{lbar/2}.
struct WhiteNoiseModulusWitness {
    double value;
    int level;
    Model f1, f2;
};
WhiteNoiseModulusWitness white_noise_sup_modulus(double eps, double beta, double radius,
                                                 int max_level_cap = 16);

} // namespace tvr

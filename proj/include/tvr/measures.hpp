#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvr/errors.hpp"
#include "tvr/linalg.hpp"
#include "tvr/rng.hpp"

namespace tvr {

enum class Family {
    GaussianLocation, // N(theta, Sigma) on R^d
    Regression,       // X ~ N(0, Sigma), y | X ~ N(X^T theta, sigma^2)
    TraceRegression,  // vec(X) ~ N(0, Sigma), y | X ~ N(<vec X, vec A>, sigma^2)
    HaarDensity,      // piecewise-constant density on [0,1) via Haar details
    WhiteNoiseSeq,    // y_lk = f_lk + z_lk, z iid N(0,1), levels 0..L
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// One observation.  `x` holds location coordinates, the design vector
// (row-major for trace regression), a point of [0,1), or a wavelet
// coefficient array; `y` is the response for the regression families.
struct SamplePoint {
    std::vector<double> x;
    double y = 0.0;
};

// An immutable member P_theta of one of the five families, with density
// evaluation, sampling, and closed-form distances to same-family members.
class Model {
public:
    static Model gaussian_location(std::vector<double> mean, Matrix cov);
    static Model gaussian_location(std::vector<double> mean); // identity cov
    static Model regression(std::vector<double> theta, Matrix design_cov, double noise_sd);
    static Model trace_regression(Matrix coeff, Matrix design_cov, double noise_sd);
    // details: level-major Haar coefficients for l = 0..max_level; the density
    // is 1 + sum f_lk psi_lk, which must be nonnegative on every cell.
    static Model haar_density(std::vector<double> details, int max_level);
    static Model white_noise_seq(std::vector<double> details, int max_level);

    Family family() const { return family_; }
    const std::vector<double>& theta() const { return theta_; }
    std::size_t sample_dim() const;
    double noise_sd() const { return noise_sd_; }
    const Matrix& covariance() const { return cov_; }
    const Matrix& covariance_cholesky() const { return chol_; }
    int max_level() const { return max_level_; }
    std::pair<std::size_t, std::size_t> matrix_shape() const { return {p1_, p2_}; }
    const std::vector<double>& cell_values() const; // haar only

    double log_density(const SamplePoint& pt) const;
    SamplePoint draw(Rng& rng) const;

    bool same_family_and_nuisance(const Model& other) const;

private:
    Model() = default;

    Family family_ = Family::GaussianLocation;
    std::vector<double> theta_;
    Matrix cov_;   // location / design covariance (families with one)
    Matrix chol_;  // cached factor of cov_
    double log_norm_const_ = 0.0;
    double noise_sd_ = 0.0;
    int max_level_ = -1;
    std::size_t p1_ = 0, p2_ = 0;
    std::vector<double> cells_;    // haar: density value per dyadic cell
    std::vector<double> cell_cum_; // haar: cumulative cell probabilities
    bool identity_cov_ = true;
};

// Exact total variation distance between same-family models (closed form or
// exact cell arithmetic; see README for the per-family formulas).
double tv_distance(const Model& p, const Model& q);

double hellinger_distance(const Model& p, const Model& q);

// Classical Hellinger-ball testing error bound 2 exp(-n/2 (H - 2 tau)^2),
// used only as a reference curve.  Requires tau < H/2.
double hellinger_testing_bound(const Model& p0, const Model& p1, double tau, long n);

// TV of the regression families as a function of a = |Sigma^{1/2} dtheta| / sigma.
double regression_tv_from_scale(double a);
// Same integral by 64-node Gauss-Hermite; kept as a cross-check (the |z| kink
// limits it to ~1e-4 accuracy, see tests).
double regression_tv_gauss_hermite(double a, std::size_t order = 64);

// Contamination distribution Q.  Shipped adversaries; the mixture model
// leaves Q arbitrary, so these are representative, not worst-case.
class Contaminant {
public:
    enum class Kind { PointMass, GaussianShift, Cauchy, SampleList };

    // Scalar point mass: every location/coefficient coordinate set to v; for
    // regression families the atom is X = (1,...,1), y = v.
    static Contaminant point_mass(double v);
    static Contaminant point_mass(SamplePoint atom);
    // A draw from the core model shifted by s in every signal coordinate
    // (response only, for the regression families).
    static Contaminant gaussian_shift(double s);
    // Heavy tails: iid Cauchy(0, scale) in the signal coordinates.
    static Contaminant cauchy(double scale);
    static Contaminant sample_list(std::vector<SamplePoint> pool);

    SamplePoint draw(const Model& core, Rng& rng) const;
    const std::string& label() const { return label_; }
    Kind kind() const { return kind_; }
    double value() const { return value_; }
    const SamplePoint& atom() const { return atom_; }

private:
    Kind kind_ = Kind::PointMass;
    double value_ = 0.0;
    SamplePoint atom_;
    std::vector<SamplePoint> pool_;
    std::string label_;
};

struct EmpiricalMeasure {
    std::vector<SamplePoint> points;
    std::vector<std::uint8_t> contaminated; // per-draw Bernoulli mask
    std::size_t size() const { return points.size(); }
};

// (1 - eps) P_theta + eps Q; eps must lie in [0,1).
struct ContaminatedSource {
    double epsilon;
    Model core;
    Contaminant q;
    ContaminatedSource(double eps, Model core_model, Contaminant contaminant);
};

// n iid draws, deterministic given the seed; each draw flips an independent
// Bernoulli(eps) coin to decide core vs contaminant.
EmpiricalMeasure sample(const ContaminatedSource& source, std::size_t n,
                        std::uint64_t seed);

} // namespace tvr

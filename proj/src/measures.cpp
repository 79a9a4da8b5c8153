#include "tvr/measures.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>

#include "tvr/gauss_hermite.hpp"
#include "tvr/haar.hpp"
#include "tvr/stats.hpp"

namespace tvr {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_identity(const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != (i == j ? 1.0 : 0.0)) return false;
    return true;
}

std::string compact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double whitened_gap(const Model& p, const Model& q) {
    std::vector<double> d(p.theta().size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = p.theta()[i] - q.theta()[i];
    if (p.covariance().empty()) { // identity covariance (sequence models)
        double s = 0;
        for (double v : d) s += v * v;
        return std::sqrt(s);
    }
    solve_lower_inplace(p.covariance_cholesky(), d);
    double s = 0;
    for (double v : d) s += v * v;
    return std::sqrt(s);
}

// a = |Sigma^{1/2}(theta - theta')| / sigma for the regression families
double regression_scale(const Model& p, const Model& q) {
    std::vector<double> d(p.theta().size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = p.theta()[i] - q.theta()[i];
    return std::sqrt(quad_form(p.covariance(), d)) / p.noise_sd();
}

} // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::GaussianLocation: return "gaussian-location";
        case Family::Regression: return "regression";
        case Family::TraceRegression: return "trace-regression";
        case Family::HaarDensity: return "haar-density";
        case Family::WhiteNoiseSeq: return "white-noise-seq";
    }
    throw ContractViolation("family_name: unknown family");
}

Family family_from_name(const std::string& name) {
    if (name == "gaussian-location") return Family::GaussianLocation;
    if (name == "regression") return Family::Regression;
    if (name == "trace-regression") return Family::TraceRegression;
    if (name == "haar-density") return Family::HaarDensity;
    if (name == "white-noise-seq") return Family::WhiteNoiseSeq;
    throw ConfigError("unknown family: " + name);
}

Model Model::gaussian_location(std::vector<double> mean, Matrix cov) {
    if (cov.rows() != mean.size() || cov.cols() != mean.size())
        throw ConfigError("gaussian_location: covariance shape mismatch");
    Model m;
    m.family_ = Family::GaussianLocation;
    m.theta_ = std::move(mean);
    m.cov_ = std::move(cov);
    m.chol_ = cholesky(m.cov_);
    m.identity_cov_ = is_identity(m.cov_);
    m.log_norm_const_ = -0.5 * (static_cast<double>(m.theta_.size()) * kLog2Pi +
                                log_det_from_cholesky(m.chol_));
    return m;
}

Model Model::gaussian_location(std::vector<double> mean) {
    std::size_t d = mean.size();
    return gaussian_location(std::move(mean), Matrix::identity(d));
}

Model Model::regression(std::vector<double> theta, Matrix design_cov, double noise_sd) {
    if (noise_sd <= 0) throw ConfigError("regression: noise scale must be positive");
    if (design_cov.rows() != theta.size() || design_cov.cols() != theta.size())
        throw ConfigError("regression: design covariance shape mismatch");
    Model m;
    m.family_ = Family::Regression;
    m.theta_ = std::move(theta);
    m.cov_ = std::move(design_cov);
    m.chol_ = cholesky(m.cov_);
    m.identity_cov_ = is_identity(m.cov_);
    m.noise_sd_ = noise_sd;
    m.log_norm_const_ = -0.5 * (static_cast<double>(m.theta_.size()) * kLog2Pi +
                                log_det_from_cholesky(m.chol_));
    return m;
}

Model Model::trace_regression(Matrix coeff, Matrix design_cov, double noise_sd) {
    std::vector<double> vec(coeff.data());
    std::size_t p1 = coeff.rows(), p2 = coeff.cols();
    Model m = regression(std::move(vec), std::move(design_cov), noise_sd);
    m.family_ = Family::TraceRegression;
    m.p1_ = p1;
    m.p2_ = p2;
    return m;
}

Model Model::haar_density(std::vector<double> details, int max_level) {
    if (max_level < 0 || details.size() != haar::coeff_count(max_level))
        throw ConfigError("haar_density: coefficient count does not match level");
    Model m;
    m.family_ = Family::HaarDensity;
    m.max_level_ = max_level;
    m.cells_ = haar::cells_from_details(details, max_level, 1.0);
    for (double c : m.cells_)
        if (c < -1e-12) throw ConfigError("haar_density: density is negative");
    for (double& c : m.cells_)
        if (c < 0) c = 0;
    m.theta_ = std::move(details);
    m.cell_cum_.resize(m.cells_.size());
    double acc = 0;
    const double width = 1.0 / static_cast<double>(m.cells_.size());
    for (std::size_t i = 0; i < m.cells_.size(); ++i) {
        acc += m.cells_[i] * width;
        m.cell_cum_[i] = acc;
    }
    return m;
}

Model Model::white_noise_seq(std::vector<double> details, int max_level) {
    if (max_level < 0 || details.size() != haar::coeff_count(max_level))
        throw ConfigError("white_noise_seq: coefficient count does not match level");
    Model m;
    m.family_ = Family::WhiteNoiseSeq;
    m.max_level_ = max_level;
    m.theta_ = std::move(details);
    return m;
}

std::size_t Model::sample_dim() const {
    switch (family_) {
        case Family::GaussianLocation: return theta_.size();
        case Family::Regression:
        case Family::TraceRegression: return theta_.size(); // plus the response
        case Family::HaarDensity: return 1;
        case Family::WhiteNoiseSeq: return theta_.size();
    }
    throw ContractViolation("sample_dim: unknown family");
}

const std::vector<double>& Model::cell_values() const {
    if (family_ != Family::HaarDensity)
        throw ContractViolation("cell_values: not a haar-density model");
    return cells_;
}

double Model::log_density(const SamplePoint& pt) const {
    switch (family_) {
        case Family::GaussianLocation: {
            if (pt.x.size() != theta_.size())
                throw ContractViolation("log_density: dimension mismatch");
            std::vector<double> d(pt.x.size());
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = pt.x[i] - theta_[i];
            double q;
            if (identity_cov_) {
                q = 0;
                for (double v : d) q += v * v;
            } else {
                solve_lower_inplace(chol_, d);
                q = 0;
                for (double v : d) q += v * v;
            }
            return log_norm_const_ - 0.5 * q;
        }
        case Family::Regression:
        case Family::TraceRegression: {
            if (pt.x.size() != theta_.size())
                throw ContractViolation("log_density: dimension mismatch");
            std::vector<double> d = pt.x;
            double qx;
            if (identity_cov_) {
                qx = 0;
                for (double v : d) qx += v * v;
            } else {
                solve_lower_inplace(chol_, d);
                qx = 0;
                for (double v : d) qx += v * v;
            }
            double mu = 0;
            for (std::size_t i = 0; i < theta_.size(); ++i) mu += pt.x[i] * theta_[i];
            double r = (pt.y - mu) / noise_sd_;
            return log_norm_const_ - 0.5 * qx - 0.5 * (kLog2Pi + r * r) -
                   std::log(noise_sd_);
        }
        case Family::HaarDensity: {
            double x = pt.x.at(0);
            if (x < 0.0 || x >= 1.0) return kNegInf;
            std::size_t cell = static_cast<std::size_t>(
                x * static_cast<double>(cells_.size()));
            if (cell >= cells_.size()) cell = cells_.size() - 1;
            return cells_[cell] > 0 ? std::log(cells_[cell]) : kNegInf;
        }
        case Family::WhiteNoiseSeq: {
            if (pt.x.size() != theta_.size())
                throw ContractViolation("log_density: dimension mismatch");
            double q = 0;
            for (std::size_t i = 0; i < theta_.size(); ++i) {
                double d = pt.x[i] - theta_[i];
                q += d * d;
            }
            return -0.5 * (static_cast<double>(theta_.size()) * kLog2Pi + q);
        }
    }
    throw ContractViolation("log_density: unknown family");
}

SamplePoint Model::draw(Rng& rng) const {
    SamplePoint pt;
    switch (family_) {
        case Family::GaussianLocation: {
            std::vector<double> z(theta_.size());
            for (double& v : z) v = rng.normal();
            pt.x = theta_;
            if (identity_cov_) {
                for (std::size_t i = 0; i < z.size(); ++i) pt.x[i] += z[i];
            } else {
                for (std::size_t i = 0; i < z.size(); ++i)
                    for (std::size_t j = 0; j <= i; ++j) pt.x[i] += chol_(i, j) * z[j];
            }
            return pt;
        }
        case Family::Regression:
        case Family::TraceRegression: {
            std::vector<double> z(theta_.size());
            for (double& v : z) v = rng.normal();
            pt.x.assign(theta_.size(), 0.0);
            if (identity_cov_) {
                pt.x = z;
            } else {
                for (std::size_t i = 0; i < z.size(); ++i)
                    for (std::size_t j = 0; j <= i; ++j) pt.x[i] += chol_(i, j) * z[j];
            }
            double mu = 0;
            for (std::size_t i = 0; i < theta_.size(); ++i) mu += pt.x[i] * theta_[i];
            pt.y = mu + noise_sd_ * rng.normal();
            return pt;
        }
        case Family::HaarDensity: {
            double u = rng.uniform();
            auto it = std::lower_bound(cell_cum_.begin(), cell_cum_.end(), u);
            std::size_t cell = static_cast<std::size_t>(it - cell_cum_.begin());
            if (cell >= cells_.size()) cell = cells_.size() - 1;
            double lo = cell == 0 ? 0.0 : cell_cum_[cell - 1];
            double width = 1.0 / static_cast<double>(cells_.size());
            double frac = cells_[cell] > 0
                              ? (u - lo) / (cells_[cell] * width)
                              : rng.uniform();
            if (frac >= 1.0) frac = std::nextafter(1.0, 0.0);
            pt.x = {(static_cast<double>(cell) + frac) * width};
            return pt;
        }
        case Family::WhiteNoiseSeq: {
            pt.x = theta_;
            for (double& v : pt.x) v += rng.normal();
            return pt;
        }
    }
    throw ContractViolation("draw: unknown family");
}

bool Model::same_family_and_nuisance(const Model& other) const {
    if (family_ != other.family_) return false;
    if (theta_.size() != other.theta_.size()) return false;
    if (cov_ != other.cov_) return false;
    if (noise_sd_ != other.noise_sd_) return false;
    if (max_level_ != other.max_level_) return false;
    if (p1_ != other.p1_ || p2_ != other.p2_) return false;
    return true;
}

double regression_tv_from_scale(double a) {
    // E_Z[2 Phi(a|Z|/2) - 1] for Z ~ N(0,1).  With an independent W ~ N(0,1),
    // 2 Phi(t) - 1 = P(|W| <= t), so the expectation equals
    // P(|W/Z| <= a/2) = (2/pi) atan(a/2), W/Z being standard Cauchy.
    return 2.0 / 3.14159265358979323846 * std::atan(0.5 * a);
}

double regression_tv_gauss_hermite(double a, std::size_t order) {
    const auto& rule = gauss_hermite(order);
    return rule.expect_standard_normal(
        [a](double z) { return 2.0 * normal_cdf(0.5 * a * std::abs(z)) - 1.0; });
}

double tv_distance(const Model& p, const Model& q) {
    if (!p.same_family_and_nuisance(q))
        throw ContractViolation("tv_distance: models must share family and nuisance");
    switch (p.family()) {
        case Family::GaussianLocation:
        case Family::WhiteNoiseSeq: {
            double gap = whitened_gap(p, q);
            return 2.0 * normal_cdf(0.5 * gap) - 1.0;
        }
        case Family::Regression:
        case Family::TraceRegression:
            return regression_tv_from_scale(regression_scale(p, q));
        case Family::HaarDensity: {
            const auto& a = p.cell_values();
            const auto& b = q.cell_values();
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
            return 0.5 * s / static_cast<double>(a.size());
        }
    }
    throw ContractViolation("tv_distance: unknown family");
}

double hellinger_distance(const Model& p, const Model& q) {
    if (!p.same_family_and_nuisance(q))
        throw ContractViolation("hellinger_distance: models must share family and nuisance");
    switch (p.family()) {
        case Family::GaussianLocation:
        case Family::WhiteNoiseSeq: {
            double gap = whitened_gap(p, q);
            return std::sqrt(2.0 - 2.0 * std::exp(-gap * gap / 8.0));
        }
        case Family::Regression:
        case Family::TraceRegression: {
            // Bhattacharyya affinity E_Z exp(-a^2 Z^2 / 8) = (1 + a^2/4)^{-1/2}
            double a = regression_scale(p, q);
            return std::sqrt(2.0 - 2.0 / std::sqrt(1.0 + 0.25 * a * a));
        }
        case Family::HaarDensity: {
            const auto& a = p.cell_values();
            const auto& b = q.cell_values();
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                double d = std::sqrt(a[i]) - std::sqrt(b[i]);
                s += d * d;
            }
            return std::sqrt(s / static_cast<double>(a.size()));
        }
    }
    throw ContractViolation("hellinger_distance: unknown family");
}

double hellinger_testing_bound(const Model& p0, const Model& p1, double tau, long n) {
    if (n < 0) throw DomainError("hellinger_testing_bound: n must be >= 0");
    double h = hellinger_distance(p0, p1);
    if (!(tau < 0.5 * h))
        throw DomainError("hellinger_testing_bound: requires tau < H/2");
    double gap = h - 2.0 * tau;
    return 2.0 * std::exp(-0.5 * static_cast<double>(n) * gap * gap);
}

Contaminant Contaminant::point_mass(double v) {
    Contaminant c;
    c.kind_ = Kind::PointMass;
    c.value_ = v;
    c.label_ = "point_mass(" + compact(v) + ")";
    return c;
}

Contaminant Contaminant::point_mass(SamplePoint atom) {
    Contaminant c;
    c.kind_ = Kind::PointMass;
    c.atom_ = std::move(atom);
    c.label_ = "point_mass(atom)";
    return c;
}

Contaminant Contaminant::gaussian_shift(double s) {
    Contaminant c;
    c.kind_ = Kind::GaussianShift;
    c.value_ = s;
    c.label_ = "gaussian_shift(" + compact(s) + ")";
    return c;
}

Contaminant Contaminant::cauchy(double scale) {
    if (scale <= 0) throw ConfigError("cauchy contaminant: scale must be positive");
    Contaminant c;
    c.kind_ = Kind::Cauchy;
    c.value_ = scale;
    c.label_ = "cauchy(" + compact(scale) + ")";
    return c;
}

Contaminant Contaminant::sample_list(std::vector<SamplePoint> pool) {
    if (pool.empty()) throw ConfigError("sample_list contaminant: empty pool");
    Contaminant c;
    c.kind_ = Kind::SampleList;
    c.pool_ = std::move(pool);
    c.label_ = "sample_list(" + std::to_string(c.pool_.size()) + ")";
    return c;
}

SamplePoint Contaminant::draw(const Model& core, Rng& rng) const {
    const bool regression = core.family() == Family::Regression ||
                            core.family() == Family::TraceRegression;
    switch (kind_) {
        case Kind::PointMass: {
            if (!atom_.x.empty()) return atom_;
            SamplePoint pt;
            if (regression) {
                pt.x.assign(core.theta().size(), 1.0);
                pt.y = value_;
            } else {
                pt.x.assign(core.sample_dim(), value_);
            }
            return pt;
        }
        case Kind::GaussianShift: {
            SamplePoint pt = core.draw(rng);
            if (regression) {
                pt.y += value_;
            } else {
                for (double& v : pt.x) v += value_;
            }
            return pt;
        }
        case Kind::Cauchy: {
            SamplePoint pt = core.draw(rng);
            if (regression) {
                pt.y = rng.cauchy(value_);
            } else {
                for (double& v : pt.x) v = rng.cauchy(value_);
            }
            return pt;
        }
        case Kind::SampleList:
            return pool_[rng.uniform_index(pool_.size())];
    }
    throw ContractViolation("contaminant draw: unknown kind");
}

ContaminatedSource::ContaminatedSource(double eps, Model core_model,
                                       Contaminant contaminant)
    : epsilon(eps), core(std::move(core_model)), q(std::move(contaminant)) {
    if (!(eps >= 0.0 && eps < 1.0))
        throw ConfigError("contamination proportion must lie in [0,1)");
}

EmpiricalMeasure sample(const ContaminatedSource& source, std::size_t n,
                        std::uint64_t seed) {
    if (n < 1) throw ContractViolation("sample: n must be >= 1");
    Rng rng(seed);
    EmpiricalMeasure out;
    out.points.reserve(n);
    out.contaminated.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool bad = source.epsilon > 0.0 && rng.bernoulli(source.epsilon);
        out.contaminated.push_back(bad ? 1 : 0);
        out.points.push_back(bad ? source.q.draw(source.core, rng)
                                 : source.core.draw(rng));
    }
    return out;
}

} // namespace tvr

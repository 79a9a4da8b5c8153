#include "tvr/models.hpp"

#include <algorithm>
#include <cmath>

#include "tvr/haar.hpp"
#include "tvr/stats.hpp"

namespace tvr {

namespace {

double sq_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double snap(double v, double step) {
    if (step <= 0) return v;
    return std::round(v / step) * step;
}

} // namespace

LossRecord losses(const Model& estimate, const Model& truth) {
    if (!estimate.same_family_and_nuisance(truth))
        throw ContractViolation("losses: models must share family and nuisance");
    LossRecord rec;
    rec.tv = tv_distance(estimate, truth);
    switch (estimate.family()) {
        case Family::GaussianLocation:
            rec.param_sq = sq_norm_diff(estimate.theta(), truth.theta());
            break;
        case Family::Regression:
        case Family::TraceRegression: {
            rec.param_sq = sq_norm_diff(estimate.theta(), truth.theta());
            std::vector<double> d(estimate.theta().size());
            for (std::size_t i = 0; i < d.size(); ++i)
                d[i] = estimate.theta()[i] - truth.theta()[i];
            rec.prediction_sq = quad_form(estimate.covariance(), d);
            break;
        }
        case Family::HaarDensity: {
            rec.l1 = 2.0 * rec.tv;
            rec.param_sq = sq_norm_diff(estimate.theta(), truth.theta());
            rec.sup_seq = haar::sup_norm_bound(estimate.theta(), truth.theta());
            break;
        }
        case Family::WhiteNoiseSeq:
            rec.param_sq = sq_norm_diff(estimate.theta(), truth.theta());
            rec.sup_seq = haar::sup_norm_bound(estimate.theta(), truth.theta());
            break;
    }
    return rec;
}

double loss_component(const LossRecord& rec, LossKind kind) {
    switch (kind) {
        case LossKind::Tv: return rec.tv;
        case LossKind::L1: return rec.l1;
        case LossKind::ParamSq: return rec.param_sq;
        case LossKind::PredictionSq: return rec.prediction_sq;
        case LossKind::SupSeq: return rec.sup_seq;
    }
    throw ContractViolation("loss_component: unknown kind");
}

ParameterSpace gaussian_location_interval(double lo, double hi, std::size_t count,
                                          double sigma) {
    if (!(lo < hi) || count < 2)
        throw ConfigError("gaussian_location_interval: need lo < hi and count >= 2");
    if (!(sigma > 0)) throw ConfigError("gaussian_location_interval: sigma must be positive");
    ParameterSpace space;
    space.name = "gaussian-location[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
    Matrix cov(1, 1);
    cov(0, 0) = sigma * sigma;
    space.grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        space.grid.push_back(Model::gaussian_location({t}, cov));
    }
    space.constraint = [lo, hi](const Model& m) {
        double t = m.theta()[0];
        return t >= lo && t <= hi;
    };
    return space;
}

ParameterSpace sparse_regression_space(const SparseRegressionSpec& spec_in) {
    SparseRegressionSpec spec = spec_in;
    if (spec.design_cov.empty()) spec.design_cov = Matrix::identity(spec.dim);
    if (spec.sparsity == 0 || spec.sparsity > spec.dim)
        throw ConfigError("sparse_regression_space: sparsity must lie in [1, p]");
    if (spec.value_grid.empty())
        throw ConfigError("sparse_regression_space: empty value grid");
    const double norm_cap = spec.radius * spec.sigma / spec.kappa;

    // signed magnitudes
    std::vector<double> values;
    for (double v : spec.value_grid) {
        values.push_back(v);
        values.push_back(-v);
    }

    ParameterSpace space;
    space.name = "sparse-regression(p=" + std::to_string(spec.dim) +
                 ",s=" + std::to_string(spec.sparsity) + ")";
    space.constraint = [spec, norm_cap](const Model& m) {
        const auto& t = m.theta();
        std::size_t nz = 0;
        double norm_sq = 0;
        for (double v : t) {
            if (v != 0.0) ++nz;
            norm_sq += v * v;
        }
        return nz <= spec.sparsity && std::sqrt(norm_sq) <= norm_cap + 1e-12;
    };

    // enumerate supports of size 1..s with all signed-value combinations
    std::vector<std::size_t> support;
    std::vector<double> theta(spec.dim, 0.0);
    auto emit = [&](auto&& self, std::size_t depth) -> void {
        if (depth == support.size()) {
            Model cand = Model::regression(theta, spec.design_cov, spec.sigma);
            if (space.constraint(cand)) space.grid.push_back(std::move(cand));
            return;
        }
        for (double v : values) {
            theta[support[depth]] = v;
            self(self, depth + 1);
        }
        theta[support[depth]] = 0.0;
    };
    auto choose = [&](auto&& self, std::size_t start, std::size_t remaining) -> void {
        if (remaining == 0) {
            emit(emit, 0);
            return;
        }
        for (std::size_t i = start; i + remaining <= spec.dim; ++i) {
            support.push_back(i);
            self(self, i + 1, remaining - 1);
            support.pop_back();
        }
    };
    for (std::size_t size = 1; size <= spec.sparsity; ++size) choose(choose, 0, size);
    if (space.grid.empty())
        throw ConfigError("sparse_regression_space: no grid point satisfies the norm cap");
    return space;
}

ParameterSpace low_rank_space(const LowRankSpec& spec_in) {
    LowRankSpec spec = spec_in;
    if (spec.design_cov.empty()) spec.design_cov = Matrix::identity(spec.rows * spec.cols);
    if (spec.rank == 0 || spec.rank > std::min(spec.rows, spec.cols))
        throw ConfigError("low_rank_space: rank must lie in [1, min(p1,p2)]");
    const double fro_cap = spec.radius * spec.sigma / spec.kappa;

    ParameterSpace space;
    space.name = "low-rank(" + std::to_string(spec.rows) + "x" + std::to_string(spec.cols) +
                 ",r=" + std::to_string(spec.rank) + ")";
    space.constraint = [fro_cap](const Model& m) {
        double s = 0;
        for (double v : m.theta()) s += v * v;
        return std::sqrt(s) <= fro_cap + 1e-12;
    };
    space.sampler = [spec, fro_cap](Rng& rng) -> Model {
        // random rank-<=r factor product, rescaled to a uniform Frobenius radius
        Matrix a(spec.rows, spec.cols);
        for (std::size_t q = 0; q < spec.rank; ++q) {
            std::vector<double> u(spec.rows), v(spec.cols);
            for (double& e : u) e = rng.normal();
            for (double& e : v) e = rng.normal();
            for (std::size_t i = 0; i < spec.rows; ++i)
                for (std::size_t j = 0; j < spec.cols; ++j) a(i, j) += u[i] * v[j];
        }
        double fro = 0;
        for (double v : a.data()) fro += v * v;
        fro = std::sqrt(fro);
        double target = fro_cap * rng.uniform();
        double scale = fro > 0 ? target / fro : 0.0;
        Matrix scaled(spec.rows, spec.cols);
        for (std::size_t i = 0; i < spec.rows; ++i)
            for (std::size_t j = 0; j < spec.cols; ++j) scaled(i, j) = a(i, j) * scale;
        return Model::trace_regression(std::move(scaled), spec.design_cov, spec.sigma);
    };
    return space;
}

namespace {

// Draw quantized coefficients in the smoothness box; optionally project the
// implied density to nonnegativity and renormalize.
std::vector<double> draw_box_coeffs(Rng& rng, double beta, double radius,
                                    int max_level, double quant) {
    std::vector<double> details(haar::coeff_count(max_level), 0.0);
    for (int l = 0; l <= max_level; ++l) {
        double cap = radius * std::pow(2.0, -l * (0.5 + beta));
        std::size_t width = std::size_t{1} << l;
        for (std::size_t k = 0; k < width; ++k) {
            double v = snap(cap * (2.0 * rng.uniform() - 1.0), quant);
            v = std::clamp(v, -cap, cap);
            details[haar::flat_index(l, k)] = v;
        }
    }
    return details;
}

} // namespace

ParameterSpace haar_density_space(const HaarDensitySpec& spec) {
    if (spec.max_level < 0) throw ConfigError("haar_density_space: bad max_level");
    ParameterSpace space;
    space.name = "haar-density(beta=" + std::to_string(spec.beta) + ")";
    const double beta = spec.beta, radius = spec.radius, quant = spec.quant;
    const int max_level = spec.max_level;
    space.constraint = [beta, radius, max_level](const Model& m) {
        return haar::holder_bounded(m.theta(), max_level, beta, radius);
    };
    space.sampler = [beta, radius, max_level, quant](Rng& rng) -> Model {
        std::vector<double> details = draw_box_coeffs(rng, beta, radius, max_level, quant);
        std::vector<double> cells = haar::cells_from_details(details, max_level, 1.0);
        bool clipped = false;
        double total = 0;
        for (double& c : cells) {
            if (c < 0) {
                c = 0;
                clipped = true;
            }
            total += c;
        }
        if (clipped || total != static_cast<double>(cells.size())) {
            double scale = static_cast<double>(cells.size()) / total;
            for (double& c : cells) c *= scale;
            details = haar::details_from_cells(cells);
        }
        return Model::haar_density(std::move(details), max_level);
    };
    return space;
}

ParameterSpace white_noise_space(const WhiteNoiseSpec& spec) {
    if (spec.max_level < 0) throw ConfigError("white_noise_space: bad max_level");
    ParameterSpace space;
    space.name = "white-noise(beta=" + std::to_string(spec.beta) + ")";
    const double beta = spec.beta, radius = spec.radius, quant = spec.quant;
    const int max_level = spec.max_level;
    space.constraint = [beta, radius, max_level](const Model& m) {
        return haar::holder_bounded(m.theta(), max_level, beta, radius);
    };
    space.sampler = [beta, radius, max_level, quant](Rng& rng) -> Model {
        return Model::white_noise_seq(draw_box_coeffs(rng, beta, radius, max_level, quant),
                                      max_level);
    };
    return space;
}

std::pair<double, double> sparse_eigenvalue_range(const Matrix& cov,
                                                  std::size_t support_size,
                                                  int trials, std::uint64_t seed) {
    if (support_size == 0 || support_size > cov.rows())
        throw ContractViolation("sparse_eigenvalue_range: bad support size");
    Rng rng(seed);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    const std::size_t p = cov.rows();
    std::vector<std::size_t> idx(p);
    for (std::size_t i = 0; i < p; ++i) idx[i] = i;
    for (int t = 0; t < trials; ++t) {
        for (std::size_t i = 0; i < support_size; ++i) {
            std::size_t j = i + rng.uniform_index(p - i);
            std::swap(idx[i], idx[j]);
        }
        std::vector<double> v(p, 0.0);
        double norm_sq = 0;
        for (std::size_t i = 0; i < support_size; ++i) {
            double g = rng.normal();
            v[idx[i]] = g;
            norm_sq += g * g;
        }
        double ratio = std::sqrt(quad_form(cov, v) / norm_sq);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    return {lo, hi};
}

std::pair<double, double> restricted_isometry_range(const Matrix& cov,
                                                    std::size_t rows, std::size_t cols,
                                                    std::size_t rank, int trials,
                                                    std::uint64_t seed) {
    if (cov.rows() != rows * cols)
        throw ContractViolation("restricted_isometry_range: covariance shape mismatch");
    Rng rng(seed);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> vec(rows * cols, 0.0);
        for (std::size_t q = 0; q < rank; ++q) {
            std::vector<double> u(rows), v(cols);
            for (double& e : u) e = rng.normal();
            for (double& e : v) e = rng.normal();
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j) vec[i * cols + j] += u[i] * v[j];
        }
        double fro_sq = 0;
        for (double v : vec) fro_sq += v * v;
        double ratio = std::sqrt(quad_form(cov, vec) / fro_sq);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    return {lo, hi};
}

int wavelet_truncation_level(double beta, double eps, std::size_t n) {
    if (!(eps >= 0.0 && eps < 0.25))
        throw DomainError("wavelet_truncation_level: requires eps < 1/4");
    if (n < 2) throw DomainError("wavelet_truncation_level: requires n >= 2");
    if (!(beta > 0)) throw DomainError("wavelet_truncation_level: beta must be positive");
    double t = std::max(std::log(static_cast<double>(n)) / static_cast<double>(n),
                        eps * eps);
    double cap = std::pow(t, -1.0 / (2.0 * beta + 1.0));
    int level = 0;
    while (std::ldexp(1.0, level + 1) <= cap) ++level;
    return level;
}

namespace {

Model wavelet_estimator_impl(const EmpiricalMeasure& data, double beta, double eps,
                             bool use_median) {
    const std::size_t n = data.size();
    int data_level = n > 0 ? haar::max_level_for_count(data.points.front().x.size()) : -1;
    if (data_level < 0)
        throw ContractViolation("wavelet estimator: data is not a coefficient array");
    int level = wavelet_truncation_level(beta, eps, n); // validates eps, n
    if (level > data_level)
        throw ConfigError("wavelet estimator: truncation level exceeds data resolution");

    const std::size_t keep = haar::coeff_count(level);
    std::vector<double> details(haar::coeff_count(data_level), 0.0);
    std::vector<double> column(n);
    for (std::size_t c = 0; c < keep; ++c) {
        for (std::size_t i = 0; i < n; ++i) column[i] = data.points[i].x[c];
        details[c] = use_median ? median(column) : mean(column);
    }
    return Model::white_noise_seq(std::move(details), data_level);
}

} // namespace

Model median_wavelet_estimator(const EmpiricalMeasure& data, double beta, double eps) {
    return wavelet_estimator_impl(data, beta, eps, true);
}

Model mean_wavelet_estimator(const EmpiricalMeasure& data, double beta, double eps) {
    return wavelet_estimator_impl(data, beta, eps, false);
}

ModulusResult modulus_of_continuity(const CoveringNet& net, double eps, LossKind kind) {
    if (!(eps > 0.0 && eps < 1.0))
        throw DomainError("modulus_of_continuity: eps must lie in (0,1)");
    const double cap = eps / (1.0 - eps);
    ModulusResult out;
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (std::size_t j = i + 1; j < net.size(); ++j) {
            if (net.tv_at(i, j) > cap) continue;
            double v = loss_component(losses(net.centers[i], net.centers[j]), kind);
            if (!out.feasible || v > out.value) {
                out.feasible = true;
                out.value = v;
                out.i = i;
                out.j = j;
            }
        }
    }
    return out;
}

double modulus_gaussian_location(double eps, double sigma) {
    if (!(eps > 0.0 && eps < 1.0))
        throw DomainError("modulus_gaussian_location: eps must lie in (0,1)");
    double cap = eps / (1.0 - eps);
    if (cap >= 1.0) return std::numeric_limits<double>::infinity();
    double gap = 2.0 * sigma * normal_quantile(0.5 * (1.0 + cap));
    return gap * gap;
}

WhiteNoiseModulusWitness white_noise_sup_modulus(double eps, double beta, double radius,
                                                 int max_level_cap) {
    if (!(eps > 0.0 && eps < 1.0))
        throw DomainError("white_noise_sup_modulus: eps must lie in (0,1)");
    if (!(eps <= radius))
        throw DomainError("white_noise_sup_modulus: eps exceeds the class radius");
    // greatest level with 2^{l(1/2+beta)} eps <= M
    int lbar = 0;
    while (lbar + 1 <= max_level_cap &&
           std::pow(2.0, (lbar + 1) * (0.5 + beta)) * eps <= radius)
        ++lbar;
    std::vector<double> zero(haar::coeff_count(lbar), 0.0);
    std::vector<double> bump = zero;
    std::size_t k = lbar >= 1 ? 1 : 0;
    bump[haar::flat_index(lbar, k)] = eps;
    return WhiteNoiseModulusWitness{eps * std::sqrt(std::ldexp(1.0, lbar)), lbar,
                                    Model::white_noise_seq(zero, lbar),
                                    Model::white_noise_seq(std::move(bump), lbar)};
}

} // namespace tvr

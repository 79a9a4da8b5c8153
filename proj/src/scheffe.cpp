#include "tvr/scheffe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvr/parallel.hpp"
#include "tvr/stats.hpp"

namespace tvr {

namespace {

constexpr double kPi = 3.14159265358979323846;

// P_under(A) for location families with shared covariance: A is the halfspace
// {w^T x > w^T mid} with w = Sigma^{-1}(theta0 - theta1).
double halfspace_probability(const ScheffeSet& set, const Model& under) {
    const auto& t0 = set.p0.theta();
    const auto& t1 = set.p1.theta();
    std::vector<double> diff(t0.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = t0[i] - t1[i];

    std::vector<double> w = diff;
    if (!set.p0.covariance().empty())
        w = solve_spd(set.p0.covariance_cholesky(), std::move(w));

    double gap_sq = 0; // diff^T Sigma^{-1} diff = Var(w^T x)
    double numer = 0;  // w^T (theta_j - mid)
    for (std::size_t i = 0; i < diff.size(); ++i) {
        gap_sq += diff[i] * w[i];
        numer += w[i] * (under.theta()[i] - 0.5 * (t0[i] + t1[i]));
    }
    return normal_cdf(numer / std::sqrt(gap_sq));
}

// P_under(A) for the regression families.  Conditionally on the design, A is
// a halfline in y with threshold X^T (theta0+theta1)/2 and direction given by
// sign(X^T (theta1-theta0)); integrating the Gaussian response and then the
// Gaussian design leaves E Phi(kappa |Z|) = 1/2 + atan(kappa)/pi.
double regression_probability(const ScheffeSet& set, const Model& under) {
    const auto& t0 = set.p0.theta();
    const auto& t1 = set.p1.theta();
    const auto& tj = under.theta();
    const Matrix& cov = set.p0.covariance();
    const double sigma = set.p0.noise_sd();

    std::vector<double> va(t0.size()), vb(t0.size());
    for (std::size_t i = 0; i < t0.size(); ++i) {
        va[i] = t1[i] - t0[i];
        vb[i] = 0.5 * (t0[i] + t1[i]) - tj[i];
    }
    std::vector<double> cov_va = matvec(cov, va);
    double var_a = 0, cov_ab = 0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        var_a += va[i] * cov_va[i];
        cov_ab += vb[i] * cov_va[i];
    }
    double var_b = quad_form(cov, vb);
    double gamma = cov_ab / var_a;
    double tau_sq = std::max(var_b - cov_ab * cov_ab / var_a, 0.0);
    double kappa = gamma * std::sqrt(var_a) / std::sqrt(sigma * sigma + tau_sq);
    return 0.5 + std::atan(kappa) / kPi;
}

double haar_probability(const ScheffeSet& set, const Model& under) {
    const auto& c0 = set.p0.cell_values();
    const auto& c1 = set.p1.cell_values();
    const auto& cj = under.cell_values();
    double s = 0;
    for (std::size_t i = 0; i < c0.size(); ++i)
        if (c0[i] > c1[i]) s += cj[i];
    return s / static_cast<double>(c0.size());
}

} // namespace

bool ScheffeSet::member(const SamplePoint& pt) const {
    return p0.log_density(pt) > p1.log_density(pt);
}

double ScheffeSet::empirical_probability(const EmpiricalMeasure& data) const {
    if (data.size() == 0) throw ContractViolation("empirical_probability: empty data");
    std::size_t count = 0;
    for (const auto& pt : data.points)
        if (member(pt)) ++count;
    return static_cast<double>(count) / static_cast<double>(data.size());
}

ScheffeSet build_scheffe_set(const Model& p0, const Model& p1) {
    if (!p0.same_family_and_nuisance(p1))
        throw ContractViolation("build_scheffe_set: models must share family and nuisance");
    if (tv_distance(p0, p1) <= 0.0)
        throw DomainError("build_scheffe_set: models coincide, set degenerates");
    ScheffeSet set{p0, p1, 0.0, 0.0};
    set.prob0 = probability_of(set, p0);
    set.prob1 = probability_of(set, p1);
    return set;
}

double probability_of(const ScheffeSet& set, const Model& under) {
    if (!set.p0.same_family_and_nuisance(under))
        throw ContractViolation("probability_of: model from a different family");
    switch (set.p0.family()) {
        case Family::GaussianLocation:
        case Family::WhiteNoiseSeq:
            return halfspace_probability(set, under);
        case Family::Regression:
        case Family::TraceRegression:
            return regression_probability(set, under);
        case Family::HaarDensity:
            return haar_probability(set, under);
    }
    throw ContractViolation("probability_of: unknown family");
}

std::pair<double, double> probability_of_mc(const ScheffeSet& set, const Model& under,
                                            std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ContractViolation("probability_of_mc: n must be positive");
    Rng rng(seed);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (set.member(under.draw(rng))) ++count;
    double p = static_cast<double>(count) / static_cast<double>(n);
    double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
    return {p, se};
}

TestDecision scheffe_test(const ScheffeSet& set, const EmpiricalMeasure& data) {
    double pn = set.empirical_probability(data);
    TestDecision d;
    d.stat0 = std::abs(pn - set.prob0);
    d.stat1 = std::abs(pn - set.prob1);
    d.phi = d.stat0 > d.stat1 ? 1 : 0;
    return d;
}

TestDecision lrt_test(const Model& p0, const Model& p1, const EmpiricalMeasure& data) {
    if (data.size() == 0) throw ContractViolation("lrt_test: empty data");
    if (!p0.same_family_and_nuisance(p1))
        throw ContractViolation("lrt_test: models must share family and nuisance");
    double finite = 0;
    long plus_inf = 0, minus_inf = 0;
    for (const auto& pt : data.points) {
        double l0 = p0.log_density(pt);
        double l1 = p1.log_density(pt);
        bool z0 = std::isinf(l0), z1 = std::isinf(l1);
        if (z0 && z1) continue; // impossible under both; carries no information
        if (z0) ++plus_inf;
        else if (z1) ++minus_inf;
        else finite += l1 - l0;
    }
    double loglik;
    if (plus_inf != minus_inf) {
        loglik = plus_inf > minus_inf ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
    } else {
        loglik = finite;
    }
    // stat0 carries the evidence against H0 so that phi = 1 iff stat0 > stat1
    TestDecision d;
    d.stat0 = loglik;
    d.stat1 = -loglik;
    d.phi = d.stat0 > d.stat1 ? 1 : 0;
    return d;
}

TestDecision huber_clipped_test(const Model& p0, const Model& p1, double c, double C,
                                const EmpiricalMeasure& data) {
    if (!(c > 0.0) || !(c <= C))
        throw ConfigError("huber_clipped_test: need 0 < c <= C");
    if (data.size() == 0) throw ContractViolation("huber_clipped_test: empty data");
    if (!p0.same_family_and_nuisance(p1))
        throw ContractViolation("huber_clipped_test: models must share family and nuisance");
    const double lo = std::log(c), hi = std::log(C);
    double loglik = 0;
    for (const auto& pt : data.points) {
        double lr = p1.log_density(pt) - p0.log_density(pt);
        if (std::isnan(lr)) lr = 0.0; // both densities zero
        loglik += std::clamp(lr, lo, hi);
    }
    TestDecision d;
    d.stat0 = loglik;
    d.stat1 = -loglik;
    d.phi = d.stat0 > d.stat1 ? 1 : 0;
    return d;
}

ExponentFit estimate_error_exponent(const Model& p0, const Model& p1, double eps,
                                    const std::vector<Contaminant>& adversaries,
                                    const std::vector<long>& n_grid, int replicates,
                                    std::uint64_t seed) {
    if (adversaries.empty())
        throw ContractViolation("estimate_error_exponent: no contaminant supplied");
    if (n_grid.empty() || !std::is_sorted(n_grid.begin(), n_grid.end()) ||
        std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end())
        throw ContractViolation("estimate_error_exponent: n grid must be increasing");
    if (replicates < 1000)
        throw ContractViolation("estimate_error_exponent: need >= 1000 replicates");
    const double tv = tv_distance(p0, p1);
    if (!(tv > 2.0 * eps))
        throw DomainError("estimate_error_exponent: requires TV(P0,P1) > 2 eps");

    ScheffeSet set = build_scheffe_set(p0, p1);
    const double gap = tv - 2.0 * eps;

    ExponentFit fit;
    fit.n_grid = n_grid;
    fit.theory_floor = 0.5 * gap * gap;
    const std::size_t R = static_cast<std::size_t>(replicates);

    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
        const std::size_t n = static_cast<std::size_t>(n_grid[ni]);
        double worst = -1.0, worst_se = 0.0;
        for (std::size_t ai = 0; ai < adversaries.size(); ++ai) {
            ContaminatedSource h0(eps, p0, adversaries[ai]);
            ContaminatedSource h1(eps, p1, adversaries[ai]);
            std::vector<std::uint8_t> wrong0(R, 0), wrong1(R, 0);
            parallel_for(R, [&](std::size_t r) {
                auto d0 = sample(h0, n, derive_seed(seed, {ni, ai, 0, r}));
                wrong0[r] = scheffe_test(set, d0).phi == 1;
                auto d1 = sample(h1, n, derive_seed(seed, {ni, ai, 1, r}));
                wrong1[r] = scheffe_test(set, d1).phi == 0;
            });
            double e0 = 0, e1 = 0;
            for (std::size_t r = 0; r < R; ++r) {
                e0 += wrong0[r];
                e1 += wrong1[r];
            }
            e0 /= static_cast<double>(R);
            e1 /= static_cast<double>(R);
            double err = e0 + e1;
            if (err > worst) {
                worst = err;
                worst_se = std::sqrt((e0 * (1 - e0) + e1 * (1 - e1)) /
                                     static_cast<double>(R));
            }
        }
        fit.error.push_back(worst);
        fit.se.push_back(worst_se);
        fit.bound.push_back(4.0 * std::exp(-0.5 * static_cast<double>(n) * gap * gap));
    }

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < fit.error.size(); ++i) {
        if (fit.error[i] > 0.0) {
            xs.push_back(static_cast<double>(fit.n_grid[i]));
            ys.push_back(-std::log(fit.error[i]));
        }
    }
    if (xs.size() >= 2) {
        LineFit line = fit_line(xs, ys);
        fit.slope = line.slope;
        fit.intercept = line.intercept;
    } else if (xs.size() == 1) {
        fit.censored = true;
        fit.slope = ys[0] / xs[0];
    } else {
        // every count was zero: error < 1/R already at the smallest n
        fit.censored = true;
        fit.slope = std::log(2.0 * static_cast<double>(R)) /
                    static_cast<double>(fit.n_grid.front());
    }
    return fit;
}

} // namespace tvr

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion pins its tolerances in code; Monte Carlo checks
// use fixed seeds so reruns are reproducible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tvr/haar.hpp"
#include "tvr/harness.hpp"
#include "tvr/models.hpp"
#include "tvr/parallel.hpp"
#include "tvr/scheffe.hpp"
#include "tvr/stats.hpp"
#include "tvr/tournament.hpp"

#include "oracles.hpp"

using namespace tvr;

namespace {

Model gauss1(double mean, double sd = 1.0) {
    Matrix cov(1, 1);
    cov(0, 0) = sd * sd;
    return Model::gaussian_location({mean}, cov);
}

EmpiricalMeasure clean_sample(const Model& m, std::size_t n, std::uint64_t seed) {
    ContaminatedSource src(0.0, m, Contaminant::point_mass(0.0));
    return sample(src, n, seed);
}

CoveringNet verbatim_gaussian_net(const std::vector<double>& means) {
    CoveringNet net;
    net.delta = 0.0; // the truth is itself a net point
    Matrix cov = Matrix::identity(1);
    for (double m : means) net.centers.push_back(Model::gaussian_location({m}, cov));
    const std::size_t m = net.centers.size();
    net.tv_matrix.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j)
                net.tv_matrix[i * m + j] = tv_distance(net.centers[i], net.centers[j]);
    return net;
}

// ---------------------------------------------------------------------------

// 1. Scheffe set optimality: prob0 - prob1 equals the tv distance to 1e-6
//    on 50 random same-family pairs.
bool criterion_scheffe_optimality(std::ostream& out) {
    Rng rng(101);
    double worst = 0;
    int pairs = 0;
    auto check = [&](const Model& a, const Model& b) {
        ScheffeSet set = build_scheffe_set(a, b);
        worst =
            std::max(worst, std::abs((set.prob0 - set.prob1) - tv_distance(a, b)));
        ++pairs;
    };
    for (int i = 0; i < 15; ++i)
        check(gauss1(2.0 * rng.normal(), 1.1), gauss1(2.0 * rng.normal(), 1.1));
    Matrix rcov = Matrix::diagonal({1.0, 2.0, 0.5});
    for (int i = 0; i < 10; ++i) {
        auto th = [&] {
            return std::vector<double>{rng.normal(), rng.normal(), rng.normal()};
        };
        check(Model::regression(th(), rcov, 1.2), Model::regression(th(), rcov, 1.2));
    }
    Matrix vcov = Matrix::identity(4);
    for (int i = 0; i < 5; ++i) {
        auto mat = [&] {
            Matrix m(2, 2);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) m(r, c) = 0.4 * rng.normal();
            return m;
        };
        check(Model::trace_regression(mat(), vcov, 1.0),
              Model::trace_regression(mat(), vcov, 1.0));
    }
    HaarDensitySpec hs;
    hs.beta = 1.0;
    hs.radius = 0.5;
    hs.max_level = 2;
    hs.quant = 0.0;
    ParameterSpace hspace = haar_density_space(hs);
    for (int i = 0; i < 10; ++i) check(hspace.sampler(rng), hspace.sampler(rng));
    WhiteNoiseSpec ws;
    ws.beta = 1.0;
    ws.radius = 0.8;
    ws.max_level = 2;
    ws.quant = 0.0;
    ParameterSpace wspace = white_noise_space(ws);
    for (int i = 0; i < 10; ++i) check(wspace.sampler(rng), wspace.sampler(rng));

    out << "pairs=" << pairs << " max|prob_gap - tv|=" << worst;
    return pairs == 50 && worst < 1e-6;
}

// 2. Testing-error envelope: empirical type-I + type-II error of the robust
//    test stays under 4 exp(-n/2 (TV - 2 eps)^2) + 3 SE on the whole grid.
bool criterion_testing_error_envelope(std::ostream& out) {
    Model p0 = gauss1(0), p1 = gauss1(1);
    std::vector<Contaminant> adversaries{Contaminant::point_mass(10.0),
                                         Contaminant::point_mass(-10.0)};
    const std::vector<long> grid{50, 100, 200, 400, 800};
    bool ok = true;
    double worst_margin = -1e300;
    for (double eps : {0.0, 0.05, 0.1}) {
        auto fit = estimate_error_exponent(
            p0, p1, eps, adversaries, grid, 10000,
            derive_seed(202, {static_cast<std::uint64_t>(eps * 100)}));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double margin = fit.error[i] - (fit.bound[i] + 3.0 * fit.se[i]);
            worst_margin = std::max(worst_margin, margin);
            if (margin > 0) ok = false;
        }
    }
    out << "worst (error - bound - 3se) = " << worst_margin << " over 15 grid points";
    return ok;
}

// 3. One unbounded outlier flips the likelihood ratio test on every seed and
//    never moves the Scheffe decision.
bool criterion_lrt_breakdown(std::ostream& out) {
    Model p0 = gauss1(0), p1 = gauss1(1);
    ScheffeSet set = build_scheffe_set(p0, p1);
    const int seeds = 100;
    std::vector<std::uint8_t> flip(seeds, 0), stable(seeds, 0);
    parallel_for(seeds, [&](std::size_t s) {
        auto data = clean_sample(p0, 10000, derive_seed(303, {s}));
        int lrt_before = lrt_test(p0, p1, data).phi;
        int scheffe_before = scheffe_test(set, data).phi;
        data.points.push_back({{1e6}, 0.0});
        flip[s] = lrt_before == 0 && lrt_test(p0, p1, data).phi == 1;
        stable[s] = scheffe_test(set, data).phi == scheffe_before;
    });
    int lrt_flips = 0, scheffe_stable = 0;
    for (int s = 0; s < seeds; ++s) {
        lrt_flips += flip[s];
        scheffe_stable += stable[s];
    }
    out << "lrt flips " << lrt_flips << "/100, scheffe unchanged " << scheffe_stable
        << "/100";
    return lrt_flips == 100 && scheffe_stable == 100;
}

// 4. Tournament failure envelope on a 3-center net: P{TV(winner, truth) >
//    eta + delta} <= global bound + 3 SE wherever the bound is informative.
bool criterion_tournament_envelope(std::ostream& out) {
    CoveringNet net = verbatim_gaussian_net({-1.0, 0.0, 1.0});
    PairwiseSets sets(net);
    const Model& truth = net.centers[1];
    const double delta = 0.0; // truth is a net point
    const std::size_t reps = 2000;
    const std::vector<std::size_t> n_grid{500, 2000, 5000};
    const std::vector<double> eta_grid{0.3, 0.35, 0.5, 0.9, 1.2};
    bool ok = true;
    int informative = 0;
    double worst_margin = -1e300;

    for (double eps : {0.0, 0.1}) {
        ContaminatedSource src(eps, truth, Contaminant::point_mass(25.0));
        for (std::size_t n : n_grid) {
            std::vector<double> loss(reps, 0.0);
            parallel_for(reps, [&](std::size_t r) {
                auto data = sample(
                    src, n,
                    derive_seed(404, {static_cast<std::uint64_t>(eps * 100), n, r}));
                auto result = run_tournament(sets, data);
                loss[r] = tv_distance(net.centers[result.winner], truth);
            });
            for (double eta : eta_grid) {
                if (!(eta > 8.0 * (eps + delta))) continue;
                double bound = global_failure_bound(net.size(), delta, eps, eta,
                                                    static_cast<long>(n));
                if (bound >= 0.5) continue; // uninformative
                double hits = 0;
                for (double l : loss)
                    if (l > eta + delta) ++hits;
                double p_hat = hits / static_cast<double>(reps);
                double se = std::sqrt(std::max(p_hat * (1 - p_hat), 0.0) /
                                      static_cast<double>(reps));
                double margin = p_hat - (bound + 3 * se);
                worst_margin = std::max(worst_margin, margin);
                if (margin > 0) ok = false;
                ++informative;
            }
        }
    }
    out << "informative points=" << informative
        << " worst (P - bound - 3se) = " << worst_margin;
    return ok && informative >= 4;
}

// 5. Density-estimation rate shape: median squared L1 loss of the tournament
//    over per-n nets decays with log-log slope in [-0.9, -0.4].
bool criterion_density_rate_shape(std::ostream& out) {
    HaarDensitySpec spec;
    spec.beta = 1.0;
    spec.radius = 0.35;
    spec.max_level = 1;
    spec.quant = 0.015;
    ParameterSpace space = haar_density_space(spec);

    const std::vector<std::size_t> n_grid{250, 500, 1000, 2000};
    const std::size_t reps = 200;
    std::vector<double> log_n, log_med;
    std::ostringstream meds;
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
        const std::size_t n = n_grid[ni];
        const double delta = 0.55 * std::pow(static_cast<double>(n), -1.0 / 3.0);
        PackingOptions opt;
        opt.budget = 3000;
        opt.max_centers = 256;
        CoveringNet net = build_greedy_packing(space, delta, opt, derive_seed(505, {ni}));
        PairwiseSets sets(net);

        std::vector<double> losses_sq(reps, 0.0);
        parallel_for(reps, [&](std::size_t r) {
            Rng truth_rng(derive_seed(506, {r}));
            Model truth = space.sampler(truth_rng);
            ContaminatedSource src(0.0, truth, Contaminant::point_mass(0.0));
            auto data = sample(src, n, derive_seed(507, {ni, r}));
            auto result = run_tournament(sets, data);
            double l1 = losses(net.centers[result.winner], truth).l1;
            losses_sq[r] = l1 * l1;
        });
        double med = median(losses_sq);
        meds << " n=" << n << ":m=" << net.size() << ",med=" << med;
        log_n.push_back(std::log(static_cast<double>(n)));
        log_med.push_back(std::log(med));
    }
    LineFit fit = fit_line(log_n, log_med);
    out << "slope=" << fit.slope << meds.str();
    return fit.slope >= -0.9 && fit.slope <= -0.4;
}

// 6. Contamination floor: at fixed n the tournament's median TV loss is
//    nondecreasing in eps and bounded by C * eps with C stable across two
//    contaminant families.
bool criterion_eps_floor(std::ostream& out) {
    ParameterSpace space = gaussian_location_interval(-1.2, 1.2, 481, 1.0);
    PackingOptions opt;
    opt.budget = 1000;
    CoveringNet net = build_greedy_packing(space, 0.02, opt, 606);
    PairwiseSets sets(net);
    Model truth = gauss1(0.0);

    const std::size_t n = 4000;
    const std::size_t reps = 150;
    const std::vector<double> eps_grid{0.0, 0.05, 0.1, 0.2};
    std::vector<Contaminant> qs{Contaminant::point_mass(25.0),
                                Contaminant::gaussian_shift(8.0)};
    bool ok = true;
    std::vector<double> c_fit;
    std::ostringstream detail;
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
        std::vector<double> medians;
        for (std::size_t ei = 0; ei < eps_grid.size(); ++ei) {
            ContaminatedSource src(eps_grid[ei], truth, qs[qi]);
            std::vector<double> loss(reps, 0.0);
            parallel_for(reps, [&](std::size_t r) {
                auto data = sample(src, n, derive_seed(607, {qi, ei, r}));
                auto result = run_tournament(sets, data);
                loss[r] = tv_distance(net.centers[result.winner], truth);
            });
            medians.push_back(median(loss));
        }
        detail << " q" << qi << ":[";
        for (double m : medians) detail << m << " ";
        detail << "]";
        for (std::size_t ei = 1; ei < medians.size(); ++ei)
            if (medians[ei] + 1e-12 < medians[ei - 1]) ok = false; // must not decrease
        double c = 0;
        for (std::size_t ei = 1; ei < eps_grid.size(); ++ei)
            c = std::max(c, medians[ei] / eps_grid[ei]);
        c_fit.push_back(c);
    }
    double c_lo = std::min(c_fit[0], c_fit[1]), c_hi = std::max(c_fit[0], c_fit[1]);
    detail << " C=[" << c_fit[0] << "," << c_fit[1] << "]";
    out << "medians nondecreasing=" << (ok ? "yes" : "no") << detail.str();
    // C positive, sane, and stable within +-50%
    return ok && c_lo > 0 && c_hi <= 3.0 && (c_hi - c_lo) <= 0.5 * c_hi;
}

// 7. Median wavelet estimator: sup-norm^2 floor grows with eps at the
//    eps^{4/3} shape, and per-coordinate shifts move the fit exactly.
bool criterion_median_wavelet(std::ostream& out) {
    const std::size_t n = 10000;
    const int data_level = 3;
    Model truth = Model::white_noise_seq(
        std::vector<double>(haar::coeff_count(data_level), 0.0), data_level);
    const std::vector<double> eps_grid{0.0, 0.05, 0.1, 0.2};
    const std::size_t reps = 50;
    std::vector<double> med_sup_sq;
    for (std::size_t ei = 0; ei < eps_grid.size(); ++ei) {
        std::vector<double> sup_sq(reps, 0.0);
        parallel_for(reps, [&](std::size_t r) {
            ContaminatedSource src(eps_grid[ei], truth, Contaminant::gaussian_shift(10.0));
            auto data = sample(src, n, derive_seed(708, {ei, r}));
            Model fit = median_wavelet_estimator(data, 1.0, eps_grid[ei]);
            double s = losses(fit, truth).sup_seq;
            sup_sq[r] = s * s;
        });
        med_sup_sq.push_back(median(sup_sq));
    }
    bool growing = med_sup_sq[0] < med_sup_sq[1] && med_sup_sq[1] < med_sup_sq[2] &&
                   med_sup_sq[2] < med_sup_sq[3];
    std::vector<double> lx, ly;
    for (std::size_t ei = 1; ei < eps_grid.size(); ++ei) {
        lx.push_back(std::log(eps_grid[ei]));
        ly.push_back(std::log(med_sup_sq[ei]));
    }
    LineFit fit = fit_line(lx, ly);

    // exact equivariance of one coordinate under a constant shift
    auto data = clean_sample(truth, 501, 709);
    Model base = median_wavelet_estimator(data, 1.0, 0.0);
    EmpiricalMeasure shifted = data;
    for (auto& pt : shifted.points) pt.x[2] += 1.25;
    Model moved = median_wavelet_estimator(shifted, 1.0, 0.0);
    bool equivariant = true;
    for (std::size_t c = 0; c < base.theta().size(); ++c) {
        double expect = base.theta()[c] + (c == 2 ? 1.25 : 0.0);
        if (moved.theta()[c] != expect) equivariant = false;
    }

    out << "med sup^2 = [" << med_sup_sq[0] << ", " << med_sup_sq[1] << ", "
        << med_sup_sq[2] << ", " << med_sup_sq[3] << "] slope=" << fit.slope
        << " equivariant=" << (equivariant ? "yes" : "no");
    return growing && fit.slope >= 1.0 && fit.slope <= 1.7 && equivariant;
}

// 8. Oracle equivalences: greedy vs exhaustive packing on a small space, and
//    the two-center minimum-distance rule coincides with the tournament.
bool criterion_oracle_equivalences(std::ostream& out) {
    SparseRegressionSpec spec;
    spec.dim = 4;
    spec.sparsity = 1;
    spec.value_grid = {0.2, 0.4};
    ParameterSpace space = sparse_regression_space(spec);
    if (space.grid.size() != 16) {
        out << "unexpected candidate count";
        return false;
    }
    std::vector<std::vector<double>> dist(16, std::vector<double>(16, 0.0));
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j)
            if (i != j) dist[i][j] = tv_distance(space.grid[i], space.grid[j]);

    bool ok = true;
    std::ostringstream detail;
    for (double delta : {0.05, 0.09, 0.13}) {
        PackingOptions opt;
        CoveringNet net = build_greedy_packing(space, delta, opt, 1);
        std::size_t best = oracle::max_packing_cardinality(dist, delta);
        double radius = covering_radius(net, space.grid);
        detail << " delta=" << delta << ":greedy=" << net.size() << ",opt=" << best
               << ",cover=" << radius;
        if (2 * net.size() < best) ok = false;
        if (radius > delta) ok = false;
        if (net.size() > 1 && net.min_pairwise_tv() < delta) ok = false;
    }

    // m = 2: minimum-distance and tournament selections coincide
    CoveringNet two = verbatim_gaussian_net({0.0, 0.8});
    two.delta = 0.1;
    PairwiseSets sets(two);
    Rng rng(811);
    int agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
        double truth = rng.uniform() * 1.6 - 0.4;
        auto data = clean_sample(gauss1(truth), 40 + rng.uniform_index(120),
                                 derive_seed(812, {static_cast<std::uint64_t>(trial)}));
        agree +=
            yatracos_minimum_distance(sets, data) == run_tournament(sets, data).winner;
    }
    detail << " m2_agree=" << agree << "/100";
    out << detail.str();
    return ok && agree == 100;
}

// 9. Determinism: identical config + seed reproduce the result CSV byte for
//    byte apart from the timestamp header line.
bool criterion_determinism(std::ostream& out) {
    nlohmann::json j{
        {"family", "gaussian-location"},
        {"space", {{"lo", -1.0}, {"hi", 1.0}, {"count", 81}, {"sigma", 1.0}}},
        {"net", {{"delta", 0.1}}},
        {"eps", {0.0, 0.1}},
        {"q", {"point_mass:10", "cauchy:1"}},
        {"n", {100, 200}},
        {"replicates", 8},
        {"estimators", {"tournament", "yatracos", "naive"}},
        {"seed", 909},
    };
    auto run_to = [&](const std::string& path) {
        j["out"] = path;
        std::ostringstream sink;
        run_experiment(parse_experiment_config(j), sink);
    };
    run_to("/tmp/tvr_acc_a.csv");
    run_to("/tmp/tvr_acc_b.csv");

    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::string all, line;
        while (std::getline(in, line)) {
            if (line.rfind("# generated:", 0) == 0) continue;
            all += line;
            all += '\n';
        }
        return all;
    };
    std::string a = slurp("/tmp/tvr_acc_a.csv"), b = slurp("/tmp/tvr_acc_b.csv");
    std::size_t rows = 0;
    {
        std::ifstream in("/tmp/tvr_acc_a.csv");
        std::string line;
        bool header = false;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!header) {
                header = true;
                continue;
            }
            ++rows;
        }
    }
    for (const char* p : {"/tmp/tvr_acc_a.csv", "/tmp/tvr_acc_b.csv"}) {
        std::remove(p);
        std::remove((std::string(p) + ".summary.csv").c_str());
    }
    out << "bytes=" << a.size() << " rows=" << rows
        << " identical=" << (a == b ? "yes" : "no");
    return !a.empty() && a == b && rows == 3 * 2 * 2 * 2 * 8;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::ostream&)> run;
};

} // namespace

int main(int argc, char** argv) {
    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    std::vector<Criterion> criteria{
        {1, "scheffe-set-optimality", criterion_scheffe_optimality},
        {2, "testing-error-envelope", criterion_testing_error_envelope},
        {3, "lrt-breakdown-vs-scheffe", criterion_lrt_breakdown},
        {4, "tournament-failure-envelope", criterion_tournament_envelope},
        {5, "density-rate-shape", criterion_density_rate_shape},
        {6, "eps-floor", criterion_eps_floor},
        {7, "median-wavelet-floor", criterion_median_wavelet},
        {8, "oracle-equivalences", criterion_oracle_equivalences},
        {9, "determinism", criterion_determinism},
    };

    int failures = 0;
    int ran = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        ++ran;
        auto t0 = std::chrono::steady_clock::now();
        std::ostringstream detail;
        bool pass = false;
        try {
            pass = c.run(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %d %s (%.1f s): %s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    secs, detail.str().c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    std::printf("ACCEPTANCE: %d/%d passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}

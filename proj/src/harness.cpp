#include "tvr/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "tvr/haar.hpp"
#include "tvr/parallel.hpp"
#include "tvr/stats.hpp"

namespace tvr {

using nlohmann::json;

namespace {

// seed-path tags so the derived streams for different purposes never collide
constexpr std::uint64_t kTagData = 1;
constexpr std::uint64_t kTagTruth = 2;
constexpr std::uint64_t kTagNet = 3;

constexpr const char* kColumns =
    "estimator,family,n,eps,q,delta,replicate,seed,status,winner,"
    "tv_loss,l1_loss,param_loss,pred_loss,sup_loss";

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

} // namespace

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double DeltaRule::at(std::size_t n) const {
    if (exponent == 0.0) return coef;
    return coef * std::pow(static_cast<double>(n), exponent);
}

Contaminant contaminant_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "point_mass") {
        if (j.contains("x")) {
            SamplePoint atom;
            atom.x = j.at("x").get<std::vector<double>>();
            atom.y = j.value("y", 0.0);
            return Contaminant::point_mass(std::move(atom));
        }
        return Contaminant::point_mass(j.at("value").get<double>());
    }
    if (kind == "gaussian_shift") return Contaminant::gaussian_shift(j.at("value").get<double>());
    if (kind == "cauchy") return Contaminant::cauchy(j.value("scale", 1.0));
    if (kind == "sample_list") {
        std::vector<SamplePoint> pool;
        for (const auto& e : j.at("points")) {
            SamplePoint pt;
            pt.x = e.at("x").get<std::vector<double>>();
            pt.y = e.value("y", 0.0);
            pool.push_back(std::move(pt));
        }
        return Contaminant::sample_list(std::move(pool));
    }
    throw ConfigError("unknown contaminant kind: " + kind);
}

Contaminant contaminant_from_string(const std::string& text) {
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    double value = 0;
    if (colon != std::string::npos) value = std::stod(text.substr(colon + 1));
    if (kind == "point_mass") return Contaminant::point_mass(value);
    if (kind == "gaussian_shift") return Contaminant::gaussian_shift(value);
    if (kind == "cauchy") return Contaminant::cauchy(value == 0 ? 1.0 : value);
    throw ConfigError("unknown contaminant spec: " + text);
}

ParameterSpace space_from_spec(Family family, const json& spec) {
    switch (family) {
        case Family::GaussianLocation:
            return gaussian_location_interval(
                spec.value("lo", -1.0), spec.value("hi", 1.0),
                spec.value("count", std::size_t{201}), spec.value("sigma", 1.0));
        case Family::Regression: {
            SparseRegressionSpec s;
            s.dim = spec.value("p", std::size_t{4});
            s.sparsity = spec.value("s", std::size_t{1});
            s.radius = spec.value("M", 1.0);
            s.sigma = spec.value("sigma", 1.0);
            if (spec.contains("cov_diag")) {
                s.design_cov = Matrix::diagonal(spec.at("cov_diag").get<std::vector<double>>());
                double lo = 1e300, hi = 0;
                for (double d : spec.at("cov_diag").get<std::vector<double>>()) {
                    lo = std::min(lo, d);
                    hi = std::max(hi, d);
                }
                s.kappa = std::sqrt(lo);
                s.kappa_upper = std::sqrt(hi);
            } else {
                s.design_cov = Matrix::identity(s.dim);
            }
            if (spec.contains("values"))
                s.value_grid = spec.at("values").get<std::vector<double>>();
            return sparse_regression_space(s);
        }
        case Family::TraceRegression: {
            LowRankSpec s;
            s.rows = spec.value("p1", std::size_t{2});
            s.cols = spec.value("p2", std::size_t{2});
            s.rank = spec.value("r", std::size_t{1});
            s.radius = spec.value("M", 1.0);
            s.sigma = spec.value("sigma", 1.0);
            if (spec.contains("cov_diag")) {
                s.design_cov = Matrix::diagonal(spec.at("cov_diag").get<std::vector<double>>());
                double lo = 1e300;
                for (double d : spec.at("cov_diag").get<std::vector<double>>())
                    lo = std::min(lo, d);
                s.kappa = std::sqrt(lo);
            }
            return low_rank_space(s);
        }
        case Family::HaarDensity: {
            HaarDensitySpec s;
            s.beta = spec.value("beta", 1.0);
            s.radius = spec.value("M", 1.0);
            s.max_level = spec.value("max_level", 1);
            s.quant = spec.value("quant", 0.02);
            return haar_density_space(s);
        }
        case Family::WhiteNoiseSeq: {
            WhiteNoiseSpec s;
            s.beta = spec.value("beta", 1.0);
            s.radius = spec.value("M", 1.0);
            s.max_level = spec.value("max_level", 2);
            s.quant = spec.value("quant", 0.02);
            return white_noise_space(s);
        }
    }
    throw ConfigError("space_from_spec: unknown family");
}

Model truth_from_spec(Family family, const json& spec, const json& truth_spec) {
    switch (family) {
        case Family::GaussianLocation: {
            double sigma = spec.value("sigma", 1.0);
            Matrix cov(1, 1);
            cov(0, 0) = sigma * sigma;
            auto theta = truth_spec.at("theta").get<std::vector<double>>();
            if (theta.size() != 1) throw ConfigError("truth theta must be 1-D here");
            return Model::gaussian_location(theta, cov);
        }
        case Family::Regression: {
            auto theta = truth_spec.at("theta").get<std::vector<double>>();
            Matrix cov = spec.contains("cov_diag")
                             ? Matrix::diagonal(spec.at("cov_diag").get<std::vector<double>>())
                             : Matrix::identity(theta.size());
            return Model::regression(theta, cov, spec.value("sigma", 1.0));
        }
        case Family::TraceRegression: {
            auto flat = truth_spec.at("theta").get<std::vector<double>>();
            std::size_t p1 = spec.value("p1", std::size_t{2});
            std::size_t p2 = spec.value("p2", std::size_t{2});
            if (flat.size() != p1 * p2) throw ConfigError("truth theta shape mismatch");
            Matrix a(p1, p2);
            for (std::size_t i = 0; i < p1; ++i)
                for (std::size_t j = 0; j < p2; ++j) a(i, j) = flat[i * p2 + j];
            Matrix cov = spec.contains("cov_diag")
                             ? Matrix::diagonal(spec.at("cov_diag").get<std::vector<double>>())
                             : Matrix::identity(p1 * p2);
            return Model::trace_regression(a, cov, spec.value("sigma", 1.0));
        }
        case Family::HaarDensity:
            return Model::haar_density(truth_spec.at("details").get<std::vector<double>>(),
                                       spec.value("max_level", 1));
        case Family::WhiteNoiseSeq:
            return Model::white_noise_seq(truth_spec.at("details").get<std::vector<double>>(),
                                          spec.value("max_level", 2));
    }
    throw ConfigError("truth_from_spec: unknown family");
}

ExperimentConfig parse_experiment_config(const json& j) {
    ExperimentConfig c;
    c.family = family_from_name(j.at("family").get<std::string>());
    c.space_spec = j.value("space", json::object());

    if (j.contains("net")) {
        const json& net = j.at("net");
        if (net.contains("delta")) {
            c.delta.coef = net.at("delta").get<double>();
            c.delta.exponent = 0.0;
        }
        if (net.contains("delta_coef")) c.delta.coef = net.at("delta_coef").get<double>();
        if (net.contains("delta_exponent"))
            c.delta.exponent = net.at("delta_exponent").get<double>();
        c.net_budget = net.value("budget", std::size_t{2000});
        c.net_cap = net.value("cap", std::size_t{512});
    }

    c.eps_grid = j.value("eps", std::vector<double>{0.0});
    if (c.eps_grid.empty()) throw ConfigError("eps grid must be nonempty");
    for (double e : c.eps_grid)
        if (!(e >= 0.0 && e < 1.0)) throw ConfigError("eps values must lie in [0,1)");

    if (j.contains("q")) {
        for (const auto& q : j.at("q")) {
            if (q.is_string())
                c.q_list.push_back(contaminant_from_string(q.get<std::string>()));
            else
                c.q_list.push_back(contaminant_from_json(q));
        }
    }
    if (c.q_list.empty()) c.q_list.push_back(Contaminant::point_mass(0.0));

    c.n_grid = j.at("n").get<std::vector<std::size_t>>();
    if (c.n_grid.empty()) throw ConfigError("n grid must be nonempty");
    for (std::size_t n : c.n_grid)
        if (n == 0) throw ConfigError("n values must be >= 1");

    c.replicates = j.value("replicates", std::size_t{1});
    if (c.replicates < 1) throw ConfigError("replicates must be >= 1");

    c.estimators = j.at("estimators").get<std::vector<std::string>>();
    if (c.estimators.empty()) throw ConfigError("estimator list must be nonempty");
    for (const auto& e : c.estimators) {
        if (e != "tournament" && e != "yatracos" && e != "naive" &&
            e != "median-wavelet" && e != "mean-wavelet")
            throw ConfigError("unknown estimator: " + e);
        if ((e == "median-wavelet" || e == "mean-wavelet") &&
            c.family != Family::WhiteNoiseSeq)
            throw ConfigError(e + " requires the white-noise-seq family");
    }

    c.seed = j.value("seed", std::uint64_t{1});
    c.out = j.value("out", std::string("result.csv"));
    c.beta = j.value("beta", c.space_spec.value("beta", 1.0));
    c.dump_samples = j.value("dump_samples", std::string());
    c.threads = j.value("threads", 0u);
    c.replicate_timeout_ms = j.value("replicate_timeout_ms", 0L);

    if (j.contains("truth") && !j.at("truth").is_string())
        c.truth = truth_from_spec(c.family, c.space_spec, j.at("truth"));

    // fail fast: the space spec must be buildable before any sampling
    space_from_spec(c.family, c.space_spec);
    return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_experiment_config(j);
}

namespace {

Model draw_truth(const ParameterSpace& space, std::uint64_t seed) {
    Rng rng(seed);
    if (space.enumerable()) {
        for (int tries = 0; tries < 256; ++tries) {
            const Model& m = space.grid[rng.uniform_index(space.grid.size())];
            if (!space.constraint || space.constraint(m)) return m;
        }
    } else {
        for (int tries = 0; tries < 256; ++tries) {
            Model m = space.sampler(rng);
            if (!space.constraint || space.constraint(m)) return m;
        }
    }
    throw ConfigError("could not draw an admissible truth from the space");
}

std::vector<double> empirical_haar_cells(const EmpiricalMeasure& data, std::size_t cells) {
    std::vector<double> freq(cells, 0.0);
    for (const auto& pt : data.points) {
        double x = pt.x[0];
        if (x < 0.0 || x >= 1.0) continue;
        auto c = static_cast<std::size_t>(x * static_cast<double>(cells));
        if (c >= cells) c = cells - 1;
        freq[c] += 1.0;
    }
    double scale = static_cast<double>(cells) / static_cast<double>(data.size());
    for (double& f : freq) f *= scale; // histogram density values
    return freq;
}

} // namespace

std::size_t naive_estimator_index(const CoveringNet& net, const EmpiricalMeasure& data) {
    if (net.size() == 0) throw ContractViolation("naive_estimator_index: empty net");
    if (data.size() == 0) throw ContractViolation("naive_estimator_index: empty data");
    const Model& head = net.centers.front();
    const std::size_t m = net.size();
    auto nearest = [&](auto&& distance) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            double d = distance(net.centers[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        return best;
    };

    switch (head.family()) {
        case Family::GaussianLocation:
        case Family::WhiteNoiseSeq: {
            std::vector<double> mean_vec(head.theta().size(), 0.0);
            for (const auto& pt : data.points)
                for (std::size_t i = 0; i < mean_vec.size(); ++i) mean_vec[i] += pt.x[i];
            for (double& v : mean_vec) v /= static_cast<double>(data.size());
            return nearest([&](const Model& c) {
                double s = 0;
                for (std::size_t i = 0; i < mean_vec.size(); ++i) {
                    double d = c.theta()[i] - mean_vec[i];
                    s += d * d;
                }
                return s;
            });
        }
        case Family::Regression:
        case Family::TraceRegression: {
            const std::size_t p = head.theta().size();
            Matrix gram(p, p);
            std::vector<double> moment(p, 0.0);
            for (const auto& pt : data.points) {
                for (std::size_t i = 0; i < p; ++i) {
                    moment[i] += pt.x[i] * pt.y;
                    for (std::size_t k = i; k < p; ++k) gram(i, k) += pt.x[i] * pt.x[k];
                }
            }
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t k = 0; k < i; ++k) gram(i, k) = gram(k, i);
            for (std::size_t i = 0; i < p; ++i) gram(i, i) += 1e-9; // guard rank deficiency
            std::vector<double> ls = solve_spd(cholesky(gram), moment);
            return nearest([&](const Model& c) {
                std::vector<double> d(p);
                for (std::size_t i = 0; i < p; ++i) d[i] = c.theta()[i] - ls[i];
                return quad_form(head.covariance(), d);
            });
        }
        case Family::HaarDensity: {
            std::vector<double> hist =
                empirical_haar_cells(data, head.cell_values().size());
            return nearest([&](const Model& c) {
                const auto& cells = c.cell_values();
                double s = 0;
                for (std::size_t i = 0; i < cells.size(); ++i)
                    s += std::abs(cells[i] - hist[i]);
                return s;
            });
        }
    }
    throw ContractViolation("naive_estimator_index: unknown family");
}

namespace {

struct RowData {
    std::string status = "ok";
    long winner = -1; // -1: not index-valued
    LossRecord loss;
};

void append_row(std::string& out, const std::string& estimator,
                const ExperimentConfig& config, std::size_t n, double eps,
                const std::string& q_label, double delta, std::size_t rep,
                std::uint64_t seed, const RowData& row) {
    out += estimator;
    out += ',';
    out += family_name(config.family);
    out += ',';
    out += std::to_string(n);
    out += ',';
    out += format_double(eps);
    out += ',';
    out += q_label;
    out += ',';
    out += format_double(delta);
    out += ',';
    out += std::to_string(rep);
    out += ',';
    out += std::to_string(seed);
    out += ',';
    out += row.status;
    out += ',';
    if (row.winner >= 0) out += std::to_string(row.winner);
    out += ',';
    out += cell(row.loss.tv);
    out += ',';
    out += cell(row.loss.l1);
    out += ',';
    out += cell(row.loss.param_sq);
    out += ',';
    out += cell(row.loss.prediction_sq);
    out += ',';
    out += cell(row.loss.sup_seq);
    out += '\n';
}

} // namespace

namespace {

// Group-by digest plus the theoretical failure bound evaluated at the
// measured 0.9-quantile radius (blank where the bound's precondition fails).
void write_summary_file(const ExperimentConfig& config,
                        const std::map<std::size_t, std::size_t>& net_sizes) {
    auto rows = summarize_result_csv(config.out);
    std::string path = config.out + ".summary.csv";
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write summary file: " + path);
    out << "# tvr-summary v1\n";
    out << "estimator,family,n,eps,q,delta,rows,errors,median_tv,q90_tv,median_l1,q90_l1,"
           "median_param,q90_param,median_pred,q90_pred,median_sup,q90_sup,"
           "net_size,bound_eta,failure_bound\n";
    for (const auto& r : rows) {
        out << r.estimator << ',' << r.family << ',' << r.n << ',' << format_double(r.eps)
            << ',' << r.q << ',' << format_double(r.delta) << ',' << r.rows << ','
            << r.errors << ',' << cell(r.median_tv) << ',' << cell(r.q90_tv) << ','
            << cell(r.median_l1) << ',' << cell(r.q90_l1) << ',' << cell(r.median_param)
            << ',' << cell(r.q90_param) << ',' << cell(r.median_pred) << ','
            << cell(r.q90_pred) << ',' << cell(r.median_sup) << ',' << cell(r.q90_sup)
            << ',';
        auto it = net_sizes.find(r.n);
        if (it != net_sizes.end()) out << it->second;
        out << ',';
        if (it != net_sizes.end() && !std::isnan(r.q90_tv)) {
            double eta = r.q90_tv - r.delta;
            if (eta > 8.0 * (r.eps + r.delta)) {
                out << format_double(eta) << ','
                    << format_double(global_failure_bound(
                           it->second, r.delta, r.eps, eta,
                           static_cast<long>(r.n)));
            } else {
                out << ',';
            }
        } else {
            out << ',';
        }
        out << '\n';
    }
}

} // namespace

void run_experiment(const ExperimentConfig& config, std::ostream& log) {
    const auto t_start = std::chrono::steady_clock::now();
    ParameterSpace space = space_from_spec(config.family, config.space_spec);
    std::map<std::size_t, std::size_t> net_sizes;

    bool needs_net = false;
    for (const auto& e : config.estimators)
        if (e == "tournament" || e == "yatracos" || e == "naive") needs_net = true;

    std::ofstream out(config.out);
    if (!out) throw ConfigError("cannot write result file: " + config.out);
    out << "# tvr-result v1\n";
    out << "# generated: " << iso_timestamp() << "\n";
    {
        json echo;
        echo["family"] = family_name(config.family);
        echo["space"] = config.space_spec;
        echo["seed"] = config.seed;
        echo["replicates"] = config.replicates;
        out << "# config: " << echo.dump() << "\n";
    }
    out << "# columns: " << kColumns << "\n";
    out << kColumns << "\n";

    for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
        const std::size_t n = config.n_grid[ni];
        const double delta_n = config.delta.at(n);

        std::optional<CoveringNet> net;
        std::optional<PairwiseSets> sets;
        if (needs_net) {
            PackingOptions opt;
            opt.budget = config.net_budget;
            opt.max_centers = config.net_cap;
            net = build_greedy_packing(space, delta_n, opt,
                                       derive_seed(config.seed, {kTagNet, ni}));
            sets.emplace(*net);
            net_sizes[n] = net->size();
            log << "n=" << n << ": net of " << net->size() << " centers at delta="
                << format_double(delta_n) << (net->capped ? " (capped)" : "") << "\n";
        }

        for (std::size_t ei = 0; ei < config.eps_grid.size(); ++ei) {
            const double eps = config.eps_grid[ei];
            for (std::size_t qi = 0; qi < config.q_list.size(); ++qi) {
                const Contaminant& q = config.q_list[qi];
                const std::size_t R = config.replicates;
                std::vector<std::vector<RowData>> rows(
                    R, std::vector<RowData>(config.estimators.size()));

                parallel_for(R, [&](std::size_t rep) {
                    Model truth = config.truth
                                      ? *config.truth
                                      : draw_truth(space, derive_seed(config.seed,
                                                                      {kTagTruth, rep}));
                    std::uint64_t data_seed =
                        derive_seed(config.seed, {kTagData, ni, ei, qi, rep});
                    EmpiricalMeasure data;
                    try {
                        ContaminatedSource src(eps, truth, q);
                        data = sample(src, n, data_seed);
                    } catch (const std::exception& e) {
                        for (auto& r : rows[rep]) {
                            r.status = std::string("error:") + e.what();
                            std::replace(r.status.begin(), r.status.end(), ',', ';');
                        }
                        return;
                    }
                    if (!config.dump_samples.empty() && rep == 0) {
                        write_samples_csv(config.dump_samples + "_n" + std::to_string(ni) +
                                              "_eps" + std::to_string(ei) + "_q" +
                                              std::to_string(qi) + ".csv",
                                          config.family, data);
                    }
                    const auto rep_start = std::chrono::steady_clock::now();
                    for (std::size_t si = 0; si < config.estimators.size(); ++si) {
                        RowData& row = rows[rep][si];
                        if (config.replicate_timeout_ms > 0) {
                            auto spent = std::chrono::duration_cast<std::chrono::milliseconds>(
                                             std::chrono::steady_clock::now() - rep_start)
                                             .count();
                            if (spent > config.replicate_timeout_ms) {
                                row.status = "timeout";
                                continue;
                            }
                        }
                        try {
                            const std::string& est = config.estimators[si];
                            if (est == "tournament") {
                                auto result = run_tournament(*sets, data);
                                row.winner = static_cast<long>(result.winner);
                                row.loss = losses(net->centers[result.winner], truth);
                            } else if (est == "yatracos") {
                                std::size_t w = yatracos_minimum_distance(*sets, data);
                                row.winner = static_cast<long>(w);
                                row.loss = losses(net->centers[w], truth);
                            } else if (est == "naive") {
                                std::size_t w = naive_estimator_index(*net, data);
                                row.winner = static_cast<long>(w);
                                row.loss = losses(net->centers[w], truth);
                            } else if (est == "median-wavelet") {
                                Model fit = median_wavelet_estimator(data, config.beta, eps);
                                row.loss = losses(fit, truth);
                            } else { // mean-wavelet
                                Model fit = mean_wavelet_estimator(data, config.beta, eps);
                                row.loss = losses(fit, truth);
                            }
                        } catch (const std::exception& e) {
                            row.status = std::string("error:") + e.what();
                            std::replace(row.status.begin(), row.status.end(), ',', ';');
                        }
                    }
                }, config.threads);

                // single serialization point, deterministic row order
                std::string block;
                for (std::size_t rep = 0; rep < R; ++rep) {
                    std::uint64_t data_seed =
                        derive_seed(config.seed, {kTagData, ni, ei, qi, rep});
                    for (std::size_t si = 0; si < config.estimators.size(); ++si)
                        append_row(block, config.estimators[si], config, n, eps, q.label(),
                                   delta_n, rep, data_seed, rows[rep][si]);
                }
                out << block;
                out.flush(); // partial results survive interruption
            }
        }
    }
    out.close();

    write_summary_file(config, net_sizes);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t_start)
                  .count();
    log << "wrote " << config.out << " (" << ms << " ms)\n";
}

namespace {

struct Accum {
    std::vector<double> tv, l1, param, pred, sup;
    std::size_t rows = 0, errors = 0;
};

double med_or_nan(const std::vector<double>& v) {
    return v.empty() ? std::numeric_limits<double>::quiet_NaN() : median(v);
}
double q90_or_nan(std::vector<double> v) {
    return v.empty() ? std::numeric_limits<double>::quiet_NaN() : quantile(std::move(v), 0.9);
}

} // namespace

std::vector<SummaryRow> summarize_result_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read result file: " + path);
    std::string line;
    bool header_seen = false;
    // key: estimator,family,n,eps,q,delta in file order
    std::vector<std::string> order;
    std::map<std::string, Accum> groups;
    std::map<std::string, SummaryRow> meta;

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) { // column header
            header_seen = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        f.resize(15);
        std::string key = f[0] + "," + f[1] + "," + f[2] + "," + f[3] + "," + f[4] + "," + f[5];
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh) {
            order.push_back(key);
            SummaryRow row;
            row.estimator = f[0];
            row.family = f[1];
            row.n = std::stoul(f[2]);
            row.eps = std::stod(f[3]);
            row.q = f[4];
            row.delta = std::stod(f[5]);
            meta[key] = row;
        }
        Accum& acc = it->second;
        ++acc.rows;
        if (f[8] != "ok") {
            ++acc.errors;
            continue;
        }
        if (!f[10].empty()) acc.tv.push_back(std::stod(f[10]));
        if (!f[11].empty()) acc.l1.push_back(std::stod(f[11]));
        if (!f[12].empty()) acc.param.push_back(std::stod(f[12]));
        if (!f[13].empty()) acc.pred.push_back(std::stod(f[13]));
        if (!f[14].empty()) acc.sup.push_back(std::stod(f[14]));
    }

    std::vector<SummaryRow> rows;
    for (const auto& key : order) {
        SummaryRow row = meta[key];
        const Accum& acc = groups[key];
        row.rows = acc.rows;
        row.errors = acc.errors;
        row.median_tv = med_or_nan(acc.tv);
        row.q90_tv = q90_or_nan(acc.tv);
        row.median_l1 = med_or_nan(acc.l1);
        row.q90_l1 = q90_or_nan(acc.l1);
        row.median_param = med_or_nan(acc.param);
        row.q90_param = q90_or_nan(acc.param);
        row.median_pred = med_or_nan(acc.pred);
        row.q90_pred = q90_or_nan(acc.pred);
        row.median_sup = med_or_nan(acc.sup);
        row.q90_sup = q90_or_nan(acc.sup);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_report(const std::string& csv_path, std::ostream& out) {
    auto rows = summarize_result_csv(csv_path);
    out << "estimator,family,n,eps,q,delta,rows,errors,median_tv,q90_tv,median_l1,q90_l1,"
           "median_param,q90_param,median_pred,q90_pred,median_sup,q90_sup\n";
    for (const auto& r : rows) {
        out << r.estimator << ',' << r.family << ',' << r.n << ',' << format_double(r.eps)
            << ',' << r.q << ',' << format_double(r.delta) << ',' << r.rows << ','
            << r.errors << ',' << cell(r.median_tv) << ',' << cell(r.q90_tv) << ','
            << cell(r.median_l1) << ',' << cell(r.q90_l1) << ',' << cell(r.median_param)
            << ',' << cell(r.q90_param) << ',' << cell(r.median_pred) << ','
            << cell(r.q90_pred) << ',' << cell(r.median_sup) << ',' << cell(r.q90_sup)
            << '\n';
    }
}

void write_samples_csv(const std::string& path, Family family,
                       const EmpiricalMeasure& data) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write samples file: " + path);
    out << "# tvr-samples v1\n";
    out << "# family: " << family_name(family) << "\n";
    out << "# columns: x...,y,contaminated\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& pt = data.points[i];
        for (double v : pt.x) out << format_double(v) << ',';
        out << format_double(pt.y) << ','
            << (data.contaminated.empty() ? 0 : int(data.contaminated[i])) << '\n';
    }
}

EmpiricalMeasure read_samples_csv(const std::string& path, Family expected_family) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read samples file: " + path);
    EmpiricalMeasure data;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("family:");
            if (pos != std::string::npos) {
                std::string name = line.substr(pos + 7);
                name.erase(0, name.find_first_not_of(' '));
                if (family_from_name(name) != expected_family)
                    throw ConfigError("samples file family mismatch: " + name);
            }
            continue;
        }
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string tok;
        try {
            while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("samples row is not numeric: " + line);
        }
        if (vals.size() < 3) throw ConfigError("samples row too short");
        SamplePoint pt;
        pt.x.assign(vals.begin(), vals.end() - 2);
        pt.y = vals[vals.size() - 2];
        data.points.push_back(std::move(pt));
        data.contaminated.push_back(static_cast<std::uint8_t>(vals.back() != 0));
    }
    if (data.points.empty()) throw ConfigError("samples file is empty");
    return data;
}

} // namespace tvr

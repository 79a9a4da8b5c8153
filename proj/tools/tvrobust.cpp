// Command-line front end: robust two-point tests, net construction,
// tournament estimation, Monte Carlo sweeps, and CSV summaries.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tvr/harness.hpp"

namespace {

using namespace tvr;

Model model_from_flags(const std::string& family_name_str, double theta, double sigma) {
    if (family_from_name(family_name_str) != Family::GaussianLocation)
        throw ConfigError("test subcommand takes scalar thetas and supports "
                          "gaussian-location only; use an experiment config for the "
                          "other families");
    Matrix cov(1, 1);
    cov(0, 0) = sigma * sigma;
    return Model::gaussian_location({theta}, cov);
}

int cmd_test(const std::string& family, double theta0, double theta1, double sigma,
             std::size_t n, double eps, const std::string& q_spec, std::uint64_t seed,
             const std::string& method, double clip_lo, double clip_hi, int truth_side,
             const std::string& dump) {
    Model p0 = model_from_flags(family, theta0, sigma);
    Model p1 = model_from_flags(family, theta1, sigma);
    Contaminant q = contaminant_from_string(q_spec);
    ContaminatedSource src(eps, truth_side == 0 ? p0 : p1, q);
    EmpiricalMeasure data = sample(src, n, seed);
    if (!dump.empty()) write_samples_csv(dump, p0.family(), data);

    TestDecision d;
    if (method == "scheffe") {
        ScheffeSet set = build_scheffe_set(p0, p1);
        d = scheffe_test(set, data);
        std::cout << "tv=" << format_double(tv_distance(p0, p1))
                  << " prob0=" << format_double(set.prob0)
                  << " prob1=" << format_double(set.prob1)
                  << " Pn=" << format_double(set.empirical_probability(data)) << "\n";
    } else if (method == "lrt") {
        d = lrt_test(p0, p1, data);
    } else if (method == "huber") {
        d = huber_clipped_test(p0, p1, clip_lo, clip_hi, data);
    } else {
        throw ConfigError("unknown method: " + method);
    }
    std::cout << "phi=" << d.phi << " stat0=" << format_double(d.stat0)
              << " stat1=" << format_double(d.stat1) << "\n";
    return 0;
}

int cmd_net(const std::string& family, const std::string& space_json, double delta,
            std::size_t budget, std::size_t cap, std::uint64_t seed,
            const std::string& out_path, std::size_t probes) {
    Family fam = family_from_name(family);
    nlohmann::json spec =
        space_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(space_json);
    ParameterSpace space = space_from_spec(fam, spec);
    PackingOptions opt;
    opt.budget = budget;
    opt.max_centers = cap;
    CoveringNet net = build_greedy_packing(space, delta, opt, seed);
    save_net(net, out_path);

    std::cout << "net: m=" << net.size()
              << " min_pairwise_tv=" << format_double(net.min_pairwise_tv())
              << (net.capped ? " (capped)" : "") << "\n";
    auto profile = local_entropy(net, delta);
    std::cout << "local_entropy:";
    for (int d : profile) std::cout << ' ' << d;
    std::cout << "\n";
    if (probes > 0) {
        // held-out probe set: report the covering gap instead of assuming zero
        Rng rng(derive_seed(seed, {0x70726f6265ULL}));
        std::vector<Model> probe_models;
        for (std::size_t i = 0; i < probes; ++i) {
            if (space.enumerable())
                probe_models.push_back(space.grid[rng.uniform_index(space.grid.size())]);
            else
                probe_models.push_back(space.sampler(rng));
        }
        std::cout << "probe_covering_radius="
                  << format_double(covering_radius(net, probe_models)) << " (" << probes
                  << " probes)\n";
    }
    return 0;
}

int cmd_estimate(const std::string& net_path, const std::string& data_path,
                 const std::string& method) {
    CoveringNet net = load_net(net_path);
    EmpiricalMeasure data = read_samples_csv(data_path, net.centers.front().family());
    PairwiseSets sets(net);
    std::size_t winner;
    if (method == "tournament") {
        auto result = run_tournament(sets, data);
        winner = result.winner;
        std::cout << tournament_to_json(result).dump(2) << "\n";
    } else if (method == "yatracos") {
        winner = yatracos_minimum_distance(sets, data);
        std::cout << "{\"winner\": " << winner << "}\n";
    } else {
        throw ConfigError("unknown method: " + method);
    }
    std::cerr << "winner index " << winner << ", theta = [";
    const auto& theta = net.centers[winner].theta();
    for (std::size_t i = 0; i < theta.size(); ++i)
        std::cerr << (i ? "," : "") << format_double(theta[i]);
    std::cerr << "]\n";
    return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_override,
                   long seed_override) {
    ExperimentConfig config = load_experiment_config(config_path);
    if (!out_override.empty()) config.out = out_override;
    if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
    run_experiment(config, std::cerr);
    return 0;
}

int cmd_report(const std::string& csv_path, const std::string& out_path) {
    if (out_path.empty()) {
        write_report(csv_path, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw ConfigError("cannot write report: " + out_path);
        write_report(csv_path, out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust estimation via total-variation tournaments"};
    app.require_subcommand(1);

    // test
    auto* test = app.add_subcommand("test", "run one robust two-point test");
    std::string t_family = "gaussian-location", t_q = "point_mass:10",
                t_method = "scheffe", t_dump;
    double t_theta0 = 0, t_theta1 = 1, t_sigma = 1, t_eps = 0, t_c = 0.1, t_C = 10;
    std::size_t t_n = 100;
    std::uint64_t t_seed = 1;
    int t_truth = 0;
    test->add_option("--family", t_family);
    test->add_option("--theta0", t_theta0);
    test->add_option("--theta1", t_theta1);
    test->add_option("--sigma", t_sigma);
    test->add_option("--n", t_n);
    test->add_option("--eps", t_eps);
    test->add_option("--q", t_q, "contaminant, e.g. point_mass:10");
    test->add_option("--seed", t_seed);
    test->add_option("--method", t_method, "scheffe|lrt|huber");
    test->add_option("--c", t_c, "huber lower clip");
    test->add_option("--C", t_C, "huber upper clip");
    test->add_option("--truth", t_truth, "sample from P0 (0) or P1 (1)");
    test->add_option("--dump", t_dump, "write the drawn dataset to this CSV");

    // net
    auto* net = app.add_subcommand("net", "build and save a TV packing net");
    std::string n_family = "gaussian-location", n_space, n_out = "net.json";
    double n_delta = 0.1;
    std::size_t n_budget = 2000, n_cap = 512, n_probes = 200;
    std::uint64_t n_seed = 1;
    net->add_option("--family", n_family);
    net->add_option("--space", n_space, "space spec as inline JSON");
    net->add_option("--delta", n_delta)->required();
    net->add_option("--budget", n_budget);
    net->add_option("--cap", n_cap);
    net->add_option("--seed", n_seed);
    net->add_option("--probes", n_probes, "held-out probe count for the covering check");
    net->add_option("--out", n_out);

    // estimate
    auto* est = app.add_subcommand("estimate", "run the tournament on a data file");
    std::string e_net, e_data, e_method = "tournament";
    est->add_option("--net", e_net)->required();
    est->add_option("--data", e_data)->required();
    est->add_option("--method", e_method, "tournament|yatracos");

    // experiment
    auto* exp = app.add_subcommand("experiment", "run a Monte Carlo sweep from a config");
    std::string x_config, x_out;
    long x_seed = -1;
    exp->add_option("--config", x_config)->required();
    exp->add_option("--out", x_out, "override the config's output path");
    exp->add_option("--seed", x_seed, "override the config's master seed");

    // report
    auto* rep = app.add_subcommand("report", "summarize a result CSV");
    std::string r_csv, r_out;
    rep->add_option("csv", r_csv)->required();
    rep->add_option("--out", r_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*test)
            return cmd_test(t_family, t_theta0, t_theta1, t_sigma, t_n, t_eps, t_q, t_seed,
                            t_method, t_c, t_C, t_truth, t_dump);
        if (*net)
            return cmd_net(n_family, n_space, n_delta, n_budget, n_cap, n_seed, n_out,
                           n_probes);
        if (*est) return cmd_estimate(e_net, e_data, e_method);
        if (*exp) return cmd_experiment(x_config, x_out, x_seed);
        if (*rep) return cmd_report(r_csv, r_out);
    } catch (const tvr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

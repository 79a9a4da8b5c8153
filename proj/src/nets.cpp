#include "tvr/nets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "tvr/parallel.hpp"

namespace tvr {

using nlohmann::json;

double CoveringNet::min_pairwise_tv() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j) best = std::min(best, tv_at(i, j));
    return best;
}

CoveringNet build_greedy_packing(const ParameterSpace& space, double delta,
                                 const PackingOptions& opt, std::uint64_t seed) {
    if (!(delta > 0)) throw DomainError("build_greedy_packing: delta must be positive");
    if (!space.enumerable() && !space.sampler)
        throw ContractViolation("build_greedy_packing: space has no candidates");

    CoveringNet net;
    net.delta = delta;

    auto try_admit = [&](const Model& cand) -> bool {
        if (space.constraint && !space.constraint(cand)) return false;
        for (const Model& c : net.centers)
            if (tv_distance(cand, c) < delta) return false;
        net.centers.push_back(cand);
        return true;
    };

    if (space.enumerable()) {
        for (const Model& cand : space.grid) {
            if (net.centers.size() >= opt.max_centers) {
                net.capped = true;
                break;
            }
            try_admit(cand);
        }
    } else {
        Rng rng(derive_seed(seed, {0x6e6574ULL}));
        std::size_t consecutive_misses = 0;
        while (consecutive_misses < opt.budget) {
            if (net.centers.size() >= opt.max_centers) {
                net.capped = true;
                break;
            }
            Model cand = space.sampler(rng);
            if (try_admit(cand))
                consecutive_misses = 0;
            else
                ++consecutive_misses;
        }
    }

    if (net.centers.empty())
        throw DomainError("build_greedy_packing: no admissible candidate found");

    const std::size_t m = net.centers.size();
    net.tv_matrix.assign(m * m, 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    parallel_for(pairs.size(), [&](std::size_t k) {
        auto [i, j] = pairs[k];
        double tv = tv_distance(net.centers[i], net.centers[j]);
        net.tv_matrix[i * m + j] = tv;
        net.tv_matrix[j * m + i] = tv;
    });
    return net;
}

std::vector<int> local_entropy(const CoveringNet& net, double delta) {
    if (net.size() == 0) throw ContractViolation("local_entropy: empty net");
    if (!(delta > 0)) throw DomainError("local_entropy: delta must be positive");
    std::vector<int> profile;
    const std::size_t m = net.size();
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<int> counts;
        for (std::size_t k = 0; k < m; ++k) {
            if (k == j) continue;
            double tv = net.tv_at(j, k);
            if (tv <= 0) continue;
            auto shell = static_cast<std::size_t>(std::ceil(tv / delta)) - 1;
            if (counts.size() <= shell) counts.resize(shell + 1, 0);
            ++counts[shell];
        }
        if (profile.size() < counts.size()) profile.resize(counts.size(), 0);
        for (std::size_t l = 0; l < counts.size(); ++l)
            profile[l] = std::max(profile[l], counts[l]);
    }
    while (!profile.empty() && profile.back() == 0) profile.pop_back();
    return profile;
}

double covering_radius(const CoveringNet& net, const std::vector<Model>& probes) {
    if (net.size() == 0) throw ContractViolation("covering_radius: empty net");
    double worst = 0;
    for (const Model& probe : probes) {
        double best = std::numeric_limits<double>::infinity();
        for (const Model& c : net.centers) best = std::min(best, tv_distance(probe, c));
        worst = std::max(worst, best);
    }
    return worst;
}

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("matrix JSON must be a nonempty array");
    std::size_t rows = j.size(), cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw ConfigError("ragged matrix JSON");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

} // namespace

json model_header_json(const Model& m) {
    json h;
    h["family"] = family_name(m.family());
    switch (m.family()) {
        case Family::GaussianLocation:
            h["cov"] = matrix_to_json(m.covariance());
            break;
        case Family::Regression:
            h["cov"] = matrix_to_json(m.covariance());
            h["sigma"] = m.noise_sd();
            break;
        case Family::TraceRegression: {
            h["cov"] = matrix_to_json(m.covariance());
            h["sigma"] = m.noise_sd();
            auto [p1, p2] = m.matrix_shape();
            h["shape"] = {p1, p2};
            break;
        }
        case Family::HaarDensity:
        case Family::WhiteNoiseSeq:
            h["max_level"] = m.max_level();
            break;
    }
    return h;
}

Model model_from_header(const json& header, std::vector<double> theta) {
    Family fam = family_from_name(header.at("family").get<std::string>());
    switch (fam) {
        case Family::GaussianLocation:
            return Model::gaussian_location(std::move(theta),
                                            matrix_from_json(header.at("cov")));
        case Family::Regression:
            return Model::regression(std::move(theta), matrix_from_json(header.at("cov")),
                                     header.at("sigma").get<double>());
        case Family::TraceRegression: {
            auto shape = header.at("shape");
            std::size_t p1 = shape[0].get<std::size_t>();
            std::size_t p2 = shape[1].get<std::size_t>();
            if (theta.size() != p1 * p2)
                throw ConfigError("trace-regression theta does not match shape");
            Matrix coeff(p1, p2);
            for (std::size_t i = 0; i < p1; ++i)
                for (std::size_t j = 0; j < p2; ++j) coeff(i, j) = theta[i * p2 + j];
            return Model::trace_regression(std::move(coeff),
                                           matrix_from_json(header.at("cov")),
                                           header.at("sigma").get<double>());
        }
        case Family::HaarDensity:
            return Model::haar_density(std::move(theta),
                                       header.at("max_level").get<int>());
        case Family::WhiteNoiseSeq:
            return Model::white_noise_seq(std::move(theta),
                                          header.at("max_level").get<int>());
    }
    throw ConfigError("model_from_header: unknown family");
}

json model_to_json(const Model& m) {
    json j = model_header_json(m);
    j["theta"] = m.theta();
    return j;
}

Model model_from_json(const json& j) {
    return model_from_header(j, j.at("theta").get<std::vector<double>>());
}

json net_to_json(const CoveringNet& net) {
    if (net.size() == 0) throw ContractViolation("net_to_json: empty net");
    json j;
    j["format"] = "tvr-net";
    j["version"] = 1;
    j["kind"] = net.kind == NetKind::Packing ? "packing" : "covering";
    j["delta"] = net.delta;
    j["capped"] = net.capped;
    j["model"] = model_header_json(net.centers.front());
    json centers = json::array();
    for (const Model& c : net.centers) centers.push_back(c.theta());
    j["centers"] = std::move(centers);
    const std::size_t m = net.size();
    json tv = json::array();
    for (std::size_t i = 0; i < m; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m; ++k) row.push_back(net.tv_at(i, k));
        tv.push_back(std::move(row));
    }
    j["tv_matrix"] = std::move(tv);
    return j;
}

CoveringNet net_from_json(const json& j) {
    if (j.value("format", "") != "tvr-net") throw ConfigError("not a tvr-net document");
    CoveringNet net;
    net.delta = j.at("delta").get<double>();
    net.kind = j.value("kind", "packing") == "covering" ? NetKind::Covering
                                                        : NetKind::Packing;
    net.capped = j.value("capped", false);
    const json& header = j.at("model");
    for (const auto& theta : j.at("centers"))
        net.centers.push_back(model_from_header(header, theta.get<std::vector<double>>()));
    const std::size_t m = net.centers.size();
    const json& tv = j.at("tv_matrix");
    if (tv.size() != m) throw ConfigError("tv_matrix shape mismatch");
    net.tv_matrix.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (tv[i].size() != m) throw ConfigError("tv_matrix shape mismatch");
        for (std::size_t k = 0; k < m; ++k) net.tv_matrix[i * m + k] = tv[i][k].get<double>();
    }
    return net;
}

void save_net(const CoveringNet& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write net file: " + path);
    out << net_to_json(net).dump(2) << '\n';
}

CoveringNet load_net(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read net file: " + path);
    json j;
    in >> j;
    return net_from_json(j);
}

} // namespace tvr

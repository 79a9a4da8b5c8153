#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvr/measures.hpp"

namespace tvr {

// Candidates for net construction: either an enumerable grid (scanned in
// order, which makes the greedy result reproducible by construction) or a
// seeded rejection sampler.  `constraint` re-checks admissibility; grid
// entries failing it are skipped.
struct ParameterSpace {
    std::string name;
    std::vector<Model> grid;
    std::function<Model(Rng&)> sampler;
    std::function<bool(const Model&)> constraint;

    bool enumerable() const { return !grid.empty(); }
};

enum class NetKind { Packing, Covering };

struct CoveringNet {
    std::vector<Model> centers;
    double delta = 0.0;
    NetKind kind = NetKind::Packing;
    bool capped = false;           // stopped by the center cap, not exhaustion
    std::vector<double> tv_matrix; // m*m row-major, symmetric, zero diagonal

    std::size_t size() const { return centers.size(); }
    double tv_at(std::size_t i, std::size_t j) const {
        return tv_matrix[i * centers.size() + j];
    }
    double min_pairwise_tv() const;
};

struct PackingOptions {
    std::size_t budget = 2000;      // sampler draws without an admission before stopping
    std::size_t max_centers = 512;  // desk-scale cap
};

// Farthest-point style greedy: a candidate joins the net iff its TV distance
// to every current center is >= delta.  The result is maximal over the
// candidates seen, hence a delta-cover of them.
CoveringNet build_greedy_packing(const ParameterSpace& space, double delta,
                                 const PackingOptions& opt, std::uint64_t seed);

// Local entropy profile: D_l = max over centers of the number of other
// centers with TV in the shell (l*delta, (l+1)*delta]; truncated after the
// last nonzero entry.
std::vector<int> local_entropy(const CoveringNet& net, double delta);

// max over probes of min TV to a center (covering verification).
double covering_radius(const CoveringNet& net, const std::vector<Model>& probes);

nlohmann::json net_to_json(const CoveringNet& net);
CoveringNet net_from_json(const nlohmann::json& j);
void save_net(const CoveringNet& net, const std::string& path);
CoveringNet load_net(const std::string& path);

// Shared helpers for (de)serializing a model family header + per-center theta.
nlohmann::json model_header_json(const Model& m);
Model model_from_header(const nlohmann::json& header, std::vector<double> theta);

// Single-model document (header + theta); round-trips bit-exactly.
nlohmann::json model_to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);

} // namespace tvr

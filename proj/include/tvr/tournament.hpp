#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tvr/nets.hpp"
#include "tvr/scheffe.hpp"

namespace tvr {

// Scheffe sets for every unordered net pair, built once and reused across
// Monte Carlo replicates that share the net.  Pairs at TV = 0 are skipped
// (they charge no losses) and recorded.
class PairwiseSets {
public:
    explicit PairwiseSets(const CoveringNet& net);

    std::size_t center_count() const { return centers_.size(); }
    const std::vector<Model>& centers() const { return centers_; }
    const std::vector<ScheffeSet>& sets() const { return sets_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& skipped() const { return skipped_; }

    // P_n(A) for every pair set, using a per-family fast path where one exists.
    std::vector<double> empirical_probabilities(const EmpiricalMeasure& data) const;

private:
    enum class Mode { Generic, HalflineSorted, HaarCells, RegressionDots };

    std::vector<Model> centers_;
    std::vector<ScheffeSet> sets_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::vector<std::pair<std::size_t, std::size_t>> skipped_;
    Mode mode_ = Mode::Generic;
    // HalflineSorted: A = {x < t} (or {x > t} when upper)
    std::vector<double> thresholds_;
    std::vector<std::uint8_t> upper_;
    // HaarCells: member cells per pair
    std::vector<std::vector<std::uint8_t>> cell_masks_;
};

struct TournamentResult {
    std::size_t winner = 0;          // 0-based index into the net
    std::vector<int> loss_counts;    // sum_k phi_jk per center
    std::vector<std::uint8_t> decisions; // m*m, phi_jk = 1 iff k beat j
    std::vector<std::size_t> tie_set;    // all indices attaining the minimum
    std::vector<std::pair<std::size_t, std::size_t>> skipped_pairs;
};

// Run every pairwise robust test and return the center losing fewest
// comparisons; argmin ties break to the lowest index.  A drawn pairwise test
// (stat0 == stat1) charges neither side.
TournamentResult run_tournament(const PairwiseSets& sets, const EmpiricalMeasure& data);
TournamentResult run_tournament(const CoveringNet& net, const EmpiricalMeasure& data);

// Minimum-distance selection over the Yatracos class {A_jk}: the center whose
// predicted probabilities stay uniformly closest to the empirical ones.
std::size_t yatracos_minimum_distance(const PairwiseSets& sets, const EmpiricalMeasure& data);
std::size_t yatracos_minimum_distance(const CoveringNet& net, const EmpiricalMeasure& data);

// 4 m^2 exp(-n/2 (eta/4 - 2(eps+delta))^2); requires eta > 8 (eps + delta).
double global_failure_bound(std::size_t m, double delta, double eps, double eta, long n);

// Layered bound from the local entropy profile D_l; L must be a positive
// multiple of 4 with (L/4) delta > 2 eps + 2 delta.
double local_failure_bound(const std::vector<int>& local_profile, double delta,
                           double eps, long big_l, long n);

nlohmann::json tournament_to_json(const TournamentResult& result);

} // namespace tvr

#include "tvr/tournament.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tvr {

PairwiseSets::PairwiseSets(const CoveringNet& net) : centers_(net.centers) {
    if (centers_.empty()) throw ContractViolation("PairwiseSets: empty net");
    const std::size_t m = centers_.size();
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
            if (net.tv_at(j, k) <= 0.0) {
                skipped_.emplace_back(j, k);
                continue;
            }
            pairs_.emplace_back(j, k);
            sets_.push_back(build_scheffe_set(centers_[j], centers_[k]));
        }
    }

    const Family fam = centers_.front().family();
    if (fam == Family::GaussianLocation && centers_.front().theta().size() == 1) {
        mode_ = Mode::HalflineSorted;
        thresholds_.reserve(sets_.size());
        upper_.reserve(sets_.size());
        for (const auto& [j, k] : pairs_) {
            double t0 = centers_[j].theta()[0];
            double t1 = centers_[k].theta()[0];
            thresholds_.push_back(0.5 * (t0 + t1));
            upper_.push_back(t0 > t1 ? 1 : 0); // A = {p_j > p_k} sits on j's side
        }
    } else if (fam == Family::HaarDensity) {
        mode_ = Mode::HaarCells;
        cell_masks_.reserve(sets_.size());
        for (const auto& [j, k] : pairs_) {
            const auto& cj = centers_[j].cell_values();
            const auto& ck = centers_[k].cell_values();
            std::vector<std::uint8_t> mask(cj.size());
            for (std::size_t c = 0; c < cj.size(); ++c) mask[c] = cj[c] > ck[c] ? 1 : 0;
            cell_masks_.push_back(std::move(mask));
        }
    } else if (fam == Family::Regression || fam == Family::TraceRegression) {
        mode_ = Mode::RegressionDots;
    }
}

std::vector<double> PairwiseSets::empirical_probabilities(
    const EmpiricalMeasure& data) const {
    if (data.size() == 0)
        throw ContractViolation("empirical_probabilities: empty data");
    const double n = static_cast<double>(data.size());
    std::vector<double> pn(sets_.size(), 0.0);

    switch (mode_) {
        case Mode::HalflineSorted: {
            std::vector<double> sorted(data.size());
            for (std::size_t i = 0; i < data.size(); ++i) sorted[i] = data.points[i].x[0];
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t s = 0; s < sets_.size(); ++s) {
                double t = thresholds_[s];
                if (upper_[s]) {
                    auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
                    pn[s] = static_cast<double>(sorted.end() - it) / n;
                } else {
                    auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
                    pn[s] = static_cast<double>(it - sorted.begin()) / n;
                }
            }
            return pn;
        }
        case Mode::HaarCells: {
            const std::size_t cells = cell_masks_.empty()
                                          ? centers_.front().cell_values().size()
                                          : cell_masks_.front().size();
            std::vector<double> freq(cells, 0.0);
            for (const auto& pt : data.points) {
                double x = pt.x[0];
                if (x < 0.0 || x >= 1.0) continue; // never inside any A
                auto c = static_cast<std::size_t>(x * static_cast<double>(cells));
                if (c >= cells) c = cells - 1;
                freq[c] += 1.0;
            }
            for (double& f : freq) f /= n;
            for (std::size_t s = 0; s < sets_.size(); ++s) {
                double acc = 0;
                const auto& mask = cell_masks_[s];
                for (std::size_t c = 0; c < cells; ++c)
                    if (mask[c]) acc += freq[c];
                pn[s] = acc;
            }
            return pn;
        }
        case Mode::RegressionDots: {
            const std::size_t m = centers_.size();
            std::vector<std::vector<double>> dots(m,
                                                  std::vector<double>(data.size(), 0.0));
            for (std::size_t j = 0; j < m; ++j) {
                const auto& theta = centers_[j].theta();
                for (std::size_t i = 0; i < data.size(); ++i) {
                    const auto& x = data.points[i].x;
                    double mu = 0;
                    for (std::size_t d = 0; d < theta.size(); ++d) mu += x[d] * theta[d];
                    dots[j][i] = mu;
                }
            }
            for (std::size_t s = 0; s < sets_.size(); ++s) {
                auto [j, k] = pairs_[s];
                std::size_t count = 0;
                for (std::size_t i = 0; i < data.size(); ++i) {
                    double rj = data.points[i].y - dots[j][i];
                    double rk = data.points[i].y - dots[k][i];
                    if (rj * rj < rk * rk) ++count;
                }
                pn[s] = static_cast<double>(count) / n;
            }
            return pn;
        }
        case Mode::Generic:
            break;
    }
    for (std::size_t s = 0; s < sets_.size(); ++s)
        pn[s] = sets_[s].empirical_probability(data);
    return pn;
}

TournamentResult run_tournament(const PairwiseSets& sets, const EmpiricalMeasure& data) {
    const std::size_t m = sets.center_count();
    if (m == 0) throw ContractViolation("run_tournament: empty net");
    if (data.size() == 0) throw ContractViolation("run_tournament: empty data");

    TournamentResult result;
    result.loss_counts.assign(m, 0);
    result.decisions.assign(m * m, 0);
    result.skipped_pairs = sets.skipped();

    std::vector<double> pn = sets.empirical_probabilities(data);
    for (std::size_t s = 0; s < sets.sets().size(); ++s) {
        auto [j, k] = sets.pairs()[s];
        const ScheffeSet& set = sets.sets()[s];
        double stat0 = std::abs(pn[s] - set.prob0);
        double stat1 = std::abs(pn[s] - set.prob1);
        if (stat0 > stat1) {
            result.decisions[j * m + k] = 1; // k favoured, j charged
            ++result.loss_counts[j];
        } else if (stat1 > stat0) {
            result.decisions[k * m + j] = 1;
            ++result.loss_counts[k];
        }
        // exact tie charges neither side
    }

    int best = *std::min_element(result.loss_counts.begin(), result.loss_counts.end());
    for (std::size_t j = 0; j < m; ++j)
        if (result.loss_counts[j] == best) result.tie_set.push_back(j);
    result.winner = result.tie_set.front();
    return result;
}

TournamentResult run_tournament(const CoveringNet& net, const EmpiricalMeasure& data) {
    return run_tournament(PairwiseSets(net), data);
}

std::size_t yatracos_minimum_distance(const PairwiseSets& sets,
                                      const EmpiricalMeasure& data) {
    const std::size_t m = sets.center_count();
    if (m < 2) throw ContractViolation("yatracos_minimum_distance: need m >= 2");
    if (data.size() == 0) throw ContractViolation("yatracos_minimum_distance: empty data");

    std::vector<double> pn = sets.empirical_probabilities(data);
    std::size_t best = 0;
    double best_obj = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        double obj = 0;
        for (std::size_t s = 0; s < sets.sets().size(); ++s) {
            double pj = probability_of(sets.sets()[s], sets.centers()[j]);
            obj = std::max(obj, std::abs(pn[s] - pj));
        }
        if (obj < best_obj) {
            best_obj = obj;
            best = j;
        }
    }
    return best;
}

std::size_t yatracos_minimum_distance(const CoveringNet& net,
                                      const EmpiricalMeasure& data) {
    return yatracos_minimum_distance(PairwiseSets(net), data);
}

double global_failure_bound(std::size_t m, double delta, double eps, double eta, long n) {
    if (n < 0) throw DomainError("global_failure_bound: n must be >= 0");
    if (!(eta > 8.0 * (eps + delta)))
        throw DomainError("global_failure_bound: requires eta > 8 (eps + delta)");
    double arg = 0.25 * eta - 2.0 * (eps + delta);
    return 4.0 * static_cast<double>(m) * static_cast<double>(m) *
           std::exp(-0.5 * static_cast<double>(n) * arg * arg);
}

double local_failure_bound(const std::vector<int>& local_profile, double delta,
                           double eps, long big_l, long n) {
    if (n < 0) throw DomainError("local_failure_bound: n must be >= 0");
    if (big_l <= 0 || big_l % 4 != 0)
        throw DomainError("local_failure_bound: L must be a positive multiple of 4");
    const long quarter = big_l / 4;
    if (!(static_cast<double>(quarter) * delta - 2.0 * eps - 2.0 * delta > 0.0))
        throw DomainError("local_failure_bound: requires (L/4) delta > 2 eps + 2 delta");

    const double nn = static_cast<double>(n);
    double first = 0;
    for (std::size_t l = static_cast<std::size_t>(quarter); l < local_profile.size(); ++l) {
        double arg = static_cast<double>(l) * delta - 2.0 * (eps + delta);
        first += local_profile[l] * std::exp(-0.5 * nn * arg * arg);
    }
    double near = 0;
    for (long l = 0; l < quarter && l < static_cast<long>(local_profile.size()); ++l)
        near += local_profile[l];
    double far = 0;
    for (std::size_t l = static_cast<std::size_t>(big_l); l < local_profile.size(); ++l) {
        double arg = (static_cast<double>(l) - 0.75 * static_cast<double>(big_l)) * delta -
                     2.0 * (eps + delta);
        far += local_profile[l] * std::exp(-0.5 * nn * arg * arg);
    }
    return 2.0 * first + 2.0 * near * far;
}

nlohmann::json tournament_to_json(const TournamentResult& result) {
    nlohmann::json j;
    j["format"] = "tvr-tournament";
    j["version"] = 1;
    j["winner"] = result.winner;
    j["loss_counts"] = result.loss_counts;
    j["tie_set"] = result.tie_set;
    const std::size_t m = result.loss_counts.size();
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < m; ++k)
            row.push_back(static_cast<int>(result.decisions[i * m + k]));
        rows.push_back(std::move(row));
    }
    j["decisions"] = std::move(rows);
    nlohmann::json skipped = nlohmann::json::array();
    for (auto [a, b] : result.skipped_pairs) skipped.push_back({a, b});
    j["skipped_pairs"] = std::move(skipped);
    return j;
}

} // namespace tvr

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tvr/measures.hpp"

namespace tvr {

// The event A = {p0 > p1}, the set with the maximal probability gap between
// the two models: P0(A) - P1(A) equals their total variation distance.
struct ScheffeSet {
    Model p0, p1;
    double prob0 = 0.0; // P0(A)
    double prob1 = 0.0; // P1(A)

    bool member(const SamplePoint& pt) const;
    double empirical_probability(const EmpiricalMeasure& data) const; // P_n(A)
};

// Throws ContractViolation on family mismatch, DomainError when TV(P0,P1)=0
// (the set degenerates).  Set probabilities are closed form for every family.
ScheffeSet build_scheffe_set(const Model& p0, const Model& p1);

// P_under(A) for an arbitrary same-family model (closed form / exact cells).
double probability_of(const ScheffeSet& set, const Model& under);

// Seeded Monte Carlo estimate of P_under(A); returns (estimate, standard error).
std::pair<double, double> probability_of_mc(const ScheffeSet& set, const Model& under,
                                            std::size_t n, std::uint64_t seed);

// phi = 1 rejects H0 in favour of P1.  Ties (stat0 == stat1) keep H0.
struct TestDecision {
    int phi = 0;
    double stat0 = 0.0;
    double stat1 = 0.0;
};

// Accept whichever model predicts P(A) closer to the empirical frequency.
TestDecision scheffe_test(const ScheffeSet& set, const EmpiricalMeasure& data);

// Neyman-Pearson likelihood ratio test at threshold 1 (equal priors).  A zero
// density at a sample point contributes a signed infinity; when both signs
// occur the majority sign decides and an exact balance falls back to the
// finite part of the sum.
TestDecision lrt_test(const Model& p0, const Model& p1, const EmpiricalMeasure& data);

// Likelihood ratio test with each factor clamped to [c, C] (0 < c <= C).
TestDecision huber_clipped_test(const Model& p0, const Model& p1, double c, double C,
                                const EmpiricalMeasure& data);

struct ExponentFit {
    std::vector<long> n_grid;
    std::vector<double> error; // worst type-I + type-II rate over the adversaries
    std::vector<double> se;    // Monte Carlo standard error of that rate
    std::vector<double> bound; // 4 exp(-n/2 (TV - 2 eps)^2)
    double slope = 0.0;        // fitted -log(error) per unit n
    double intercept = 0.0;
    double theory_floor = 0.0; // (TV - 2 eps)^2 / 2
    bool censored = false;     // too few nonzero error counts for a real fit;
                               // slope then reports a lower bound
};

// Monte Carlo testing error of the Scheffe test across a sample-size grid,
// taking the worst rate over the supplied contaminants on each side.
// Requires TV(P0,P1) > 2 eps, an increasing n grid, replicates >= 1000.
ExponentFit estimate_error_exponent(const Model& p0, const Model& p1, double eps,
                                    const std::vector<Contaminant>& adversaries,
                                    const std::vector<long>& n_grid, int replicates,
                                    std::uint64_t seed);

} // namespace tvr

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <vector>

namespace hppseg::hpp {

// Discrete probabilistic world for the highly-probable-positive learning
// guarantee: a finite support, class conditionals p(x|E+), p(x|E-)
// independent of the selected set S, the class prior, a threshold q, and the
// composition of the selected set (p(E+|S), p(S)).
struct Scenario {
    Eigen::VectorXd cond_pos;  // p(x|E+), sums to 1
    Eigen::VectorXd cond_neg;  // p(x|E-), sums to 1
    double prior_pos = 0.0;    // p(E+)
    double q = 0.5;
    double sel_prob_pos = 0.0;  // p(E+|S)
    double sel_mass = 0.0;      // p(S)

    int support_size() const { return static_cast<int>(cond_pos.size()); }
    double prior_neg() const { return 1.0 - prior_pos; }
    double sel_prob_neg() const { return 1.0 - sel_prob_pos; }
    // Sum rule: p(E+) = p(E+|S) p(S) + p(E+|notS) (1 - p(S)).
    double notsel_prob_pos() const { return (prior_pos - sel_prob_pos * sel_mass) / (1.0 - sel_mass); }
    double notsel_prob_neg() const { return 1.0 - notsel_prob_pos(); }

    // Throws std::invalid_argument when the scenario is not a consistent
    // probabilistic world (conditionals not normalized, derived
    // probabilities outside [0,1], ...).
    void validate() const;
};

struct HypothesisReport {
    bool h1 = false;  // p(E+) < q < p(E-)
    bool h2 = false;  // p(E+|S) > q > p(E-|S)
    bool h3 = true;   // conditionals defined independently of S, by construction
    bool all() const { return h1 && h2 && h3; }
};

HypothesisReport check_hypotheses(const Scenario& s);

struct MixtureLikelihood {
    double given_sel = 0.0;     // p(x|S)
    double given_notsel = 0.0;  // p(x|notS)
};

// p(x|S)    = p(E+|S)    (p(x|E+) - p(x|E-)) + p(x|E-)
// p(x|notS) = p(E+|notS) (p(x|E+) - p(x|E-)) + p(x|E-)
MixtureLikelihood mixture_likelihoods(const Scenario& s, int x);

struct PropositionResult {
    bool holds = true;
    std::vector<int> counterexamples;  // support points where the biconditional fails
};

// Exhaustively checks p(x|S) > p(x|notS) <=> p(x|E+) > p(x|E-) over the
// support. Ties on either side are not counterexamples.
PropositionResult verify_proposition(const Scenario& s);

// Draws n_samples from the joint (class, S-membership, x), estimates the
// mixture likelihoods by counting, and reports the fraction of the support
// where the empirical S-vs-notS decision matches the true-class decision.
// Deterministic under fixed seed.
double simulate_empirical(const Scenario& s, long long n_samples, std::uint64_t seed);

// Random scenario satisfying H1-H3 by construction. Ranges: p(E+) uniform in
// [0.05, 0.45]; q uniform in the middle 90% of (p(E+), p(E-)); p(E+|S)
// uniform in the middle 90% of (max(q, 1-q), 1); p(S) uniform below
// 0.95 * p(E+)/p(E+|S); conditionals Dirichlet(1)-sampled.
Scenario random_scenario(std::mt19937_64& rng, int support_size);

// Random scenario violating H2 with p(E+|S) < p(E+), so the selected set is
// *worse* than chance and the decision flips wherever it is strict.
Scenario random_violating_scenario(std::mt19937_64& rng, int support_size);

}  // namespace hppseg::hpp

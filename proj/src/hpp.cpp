#include "hppseg/hpp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hppseg::hpp {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

Eigen::VectorXd dirichlet(std::mt19937_64& rng, int n) {
    Eigen::VectorXd v(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = std::max(uniform01(rng), 1e-12);
        v[i] = -std::log(u);
        sum += v[i];
    }
    return v / sum;
}

int sample_discrete(std::mt19937_64& rng, const Eigen::VectorXd& pmf) {
    double u = uniform01(rng);
    for (int i = 0; i < pmf.size(); ++i) {
        u -= pmf[i];
        if (u < 0.0) return i;
    }
    return static_cast<int>(pmf.size()) - 1;
}

}  // namespace

void Scenario::validate() const {
    if (cond_pos.size() != cond_neg.size() || cond_pos.size() == 0) {
        throw std::invalid_argument("conditionals must share a nonempty support");
    }
    for (int i = 0; i < cond_pos.size(); ++i) {
        if (cond_pos[i] < 0.0 || cond_neg[i] < 0.0) {
            throw std::invalid_argument("negative probability mass");
        }
    }
    if (std::abs(cond_pos.sum() - 1.0) > 1e-12 || std::abs(cond_neg.sum() - 1.0) > 1e-12) {
        throw std::invalid_argument("conditionals must sum to 1 within 1e-12");
    }
    if (!(prior_pos > 0.0 && prior_pos < 1.0)) throw std::invalid_argument("p(E+) must be in (0,1)");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must be in (0,1)");
    if (!in_unit(sel_prob_pos)) throw std::invalid_argument("p(E+|S) must be in [0,1]");
    if (!(sel_mass > 0.0 && sel_mass < 1.0)) throw std::invalid_argument("p(S) must be in (0,1)");
    const double npos = notsel_prob_pos();
    if (!in_unit(npos) || !in_unit(notsel_prob_neg())) {
        throw std::invalid_argument("derived p(E+|notS) = " + std::to_string(npos) +
                                    " outside [0,1]; joint is inconsistent");
    }
}

HypothesisReport check_hypotheses(const Scenario& s) {
    HypothesisReport r;
    r.h1 = s.prior_pos < s.q && s.q < s.prior_neg();
    r.h2 = s.sel_prob_pos > s.q && s.q > s.sel_prob_neg();
    r.h3 = true;
    return r;
}

MixtureLikelihood mixture_likelihoods(const Scenario& s, int x) {
    if (x < 0 || x >= s.support_size()) throw std::out_of_range("x not in support");
    const double diff = s.cond_pos[x] - s.cond_neg[x];
    MixtureLikelihood out;
    out.given_sel = s.sel_prob_pos * diff + s.cond_neg[x];
    out.given_notsel = s.notsel_prob_pos() * diff + s.cond_neg[x];
    return out;
}

PropositionResult verify_proposition(const Scenario& s) {
    PropositionResult result;
    for (int x = 0; x < s.support_size(); ++x) {
        const MixtureLikelihood ml = mixture_likelihoods(s, x);
        const double scale = std::max({s.cond_pos[x], s.cond_neg[x], 1e-300});
        const double tol = 1e-12 * scale;
        const double d_sel = ml.given_sel - ml.given_notsel;
        const double d_true = s.cond_pos[x] - s.cond_neg[x];
        const bool disagree = (d_sel > tol && d_true < -tol) || (d_sel < -tol && d_true > tol);
        if (disagree) {
            result.holds = false;
            result.counterexamples.push_back(x);
        }
    }
    return result;
}

double simulate_empirical(const Scenario& s, long long n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    s.validate();
    std::mt19937_64 rng(seed);

    // Membership probabilities per class via Bayes.
    const double p_sel_given_pos = s.sel_prob_pos * s.sel_mass / s.prior_pos;
    const double p_sel_given_neg = s.sel_prob_neg() * s.sel_mass / s.prior_neg();

    const int n = s.support_size();
    std::vector<long long> cnt_sel(n, 0), cnt_notsel(n, 0);
    long long n_sel = 0, n_notsel = 0;
    for (long long i = 0; i < n_samples; ++i) {
        const bool positive = uniform01(rng) < s.prior_pos;
        const bool in_sel = uniform01(rng) < (positive ? p_sel_given_pos : p_sel_given_neg);
        const int x = sample_discrete(rng, positive ? s.cond_pos : s.cond_neg);
        if (in_sel) {
            ++cnt_sel[x];
            ++n_sel;
        } else {
            ++cnt_notsel[x];
            ++n_notsel;
        }
    }

    int agree = 0;
    for (int x = 0; x < n; ++x) {
        // p_hat(x|S) vs p_hat(x|notS) compared by cross-multiplication; exact
        // in int64 for any sample count below ~3e9.
        const long long lhs = cnt_sel[x] * n_notsel;
        const long long rhs = cnt_notsel[x] * n_sel;
        const int emp = lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
        const double d_true = s.cond_pos[x] - s.cond_neg[x];
        const int truth = d_true > 0.0 ? 1 : (d_true < 0.0 ? -1 : 0);
        if (emp == truth) ++agree;
    }
    return static_cast<double>(agree) / n;
}

Scenario random_scenario(std::mt19937_64& rng, int support_size) {
    Scenario s;
    s.cond_pos = dirichlet(rng, support_size);
    s.cond_neg = dirichlet(rng, support_size);
    s.prior_pos = uniform(rng, 0.05, 0.45);
    s.q = uniform(rng, s.prior_pos + 0.05 * (s.prior_neg() - s.prior_pos),
                  s.prior_pos + 0.95 * (s.prior_neg() - s.prior_pos));
    const double lo = std::max(s.q, 1.0 - s.q);
    s.sel_prob_pos = uniform(rng, lo + 0.05 * (1.0 - lo), lo + 0.95 * (1.0 - lo));
    const double mass_cap = 0.95 * s.prior_pos / s.sel_prob_pos;
    s.sel_mass = uniform(rng, 0.05 * mass_cap, mass_cap);
    s.validate();
    return s;
}

Scenario random_violating_scenario(std::mt19937_64& rng, int support_size) {
    Scenario s;
    s.cond_pos = dirichlet(rng, support_size);
    s.cond_neg = dirichlet(rng, support_size);
    s.prior_pos = uniform(rng, 0.05, 0.45);
    s.q = uniform(rng, s.prior_pos + 0.05 * (s.prior_neg() - s.prior_pos),
                  s.prior_pos + 0.95 * (s.prior_neg() - s.prior_pos));
    // Selected set poorer in positives than the prior: p(E+|S) < p(E+) < q.
    s.sel_prob_pos = uniform(rng, 0.05 * s.prior_pos, 0.9 * s.prior_pos);
    const double mass_cap = 0.9 * (1.0 - s.prior_pos) / (1.0 - s.sel_prob_pos);
    s.sel_mass = uniform(rng, 0.05, std::min(0.9, mass_cap));
    s.validate();
    return s;
}

}  // namespace hppseg::hpp

#include "hppseg/patchmodel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hppseg {

namespace {

// Colors present in the rectangle [x0,x1] x [y0,y1] (inclusive, inside frame).
std::vector<std::uint16_t> colors_in_rect(const QuantizedFrame& frame, int x0, int y0, int x1,
                                          int y1) {
    std::vector<std::uint8_t> seen(kColorCount, 0);
    std::vector<std::uint16_t> present;
    for (int y = y0; y <= y1; ++y) {
        const std::uint16_t* row = frame.colors.data() + static_cast<std::size_t>(y) * frame.width;
        for (int x = x0; x <= x1; ++x) {
            const std::uint16_t c = row[x];
            if (!seen[c]) {
                seen[c] = 1;
                present.push_back(c);
            }
        }
    }
    std::sort(present.begin(), present.end());
    return present;
}

std::vector<int> top_k_indices(const Eigen::VectorXd& values, int k) {
    std::vector<int> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return a < b;  // stable tie-break for determinism
    });
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

Eigen::VectorXd vertex(const std::vector<int>& support, int n, int k) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (int i : support) w[i] = 1.0 / k;
    return w;
}

}  // namespace

bool PatchDescriptor::has(int color) const {
    return std::binary_search(present.begin(), present.end(), static_cast<std::uint16_t>(color));
}

PatchDescriptor extract_descriptor(const QuantizedFrame& frame, int center_x, int center_y,
                                   int window) {
    if (window < 1) throw std::invalid_argument("empty window");
    const int r = window / 2;
    const int x0 = center_x - r, y0 = center_y - r;
    const int x1 = x0 + window - 1, y1 = y0 + window - 1;
    if (x0 < 0 || y0 < 0 || x1 >= frame.width || y1 >= frame.height) {
        throw std::invalid_argument("window not fully inside frame; clamp the center");
    }
    PatchDescriptor d;
    d.center_x = center_x;
    d.center_y = center_y;
    d.window = window;
    d.present = colors_in_rect(frame, x0, y0, x1, y1);
    return d;
}

Eigen::MatrixXd TrainingSet::dense() const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size(), n_colors);
    for (int i = 0; i < size(); ++i) {
        for (std::uint16_t c : rows[i]) out(i, c) = 1.0;
    }
    return out;
}

TrainingSet build_training_set(const std::vector<QuantizedFrame>& frames,
                               const std::vector<SoftMask>& masks, int grid_stride, int window,
                               int max_samples, std::uint64_t seed) {
    if (frames.size() != masks.size()) throw std::invalid_argument("need one mask per frame");
    if (grid_stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (window < 1) throw std::invalid_argument("empty window");

    const int r = window / 2;
    struct Site {
        int frame, x, y;
    };
    std::vector<Site> sites;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const int w = frames[f].width, h = frames[f].height;
        if (w < window || h < window) continue;
        for (int y = r; y + r < h; y += grid_stride) {
            for (int x = r; x + r < w; x += grid_stride) {
                sites.push_back({static_cast<int>(f), x, y});
            }
        }
    }

    if (max_samples > 0 && static_cast<int>(sites.size()) > max_samples) {
        // Seeded partial Fisher-Yates, then restore deterministic order.
        std::mt19937_64 rng(seed);
        for (int i = 0; i < max_samples; ++i) {
            const std::size_t j = i + rng() % (sites.size() - i);
            std::swap(sites[i], sites[j]);
        }
        sites.resize(max_samples);
        std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
            if (a.frame != b.frame) return a.frame < b.frame;
            if (a.y != b.y) return a.y < b.y;
            return a.x < b.x;
        });
    }

    TrainingSet out;
    out.rows.reserve(sites.size());
    out.labels.resize(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const Site& s = sites[i];
        out.rows.push_back(
            colors_in_rect(frames[s.frame], s.x - r, s.y - r, s.x + r, s.y + r));
        out.labels[static_cast<Eigen::Index>(i)] = masks[s.frame].at(s.x, s.y);
    }
    return out;
}

Eigen::MatrixXd color_covariance(const TrainingSet& data) {
    const int m = data.size();
    if (m < 2) throw std::invalid_argument("covariance needs at least 2 samples");
    const int n = data.n_colors;

    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd pair_counts = Eigen::MatrixXd::Zero(n, n);
    for (const auto& row : data.rows) {
        for (std::size_t a = 0; a < row.size(); ++a) {
            counts[row[a]] += 1.0;
            for (std::size_t b = a; b < row.size(); ++b) {
                pair_counts(row[a], row[b]) += 1.0;  // upper triangle, binary bits
            }
        }
    }
    const Eigen::VectorXd mean = counts / m;
    Eigen::MatrixXd cov(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double c = (pair_counts(i, j) - m * mean[i] * mean[j]) / (m - 1);
            cov(i, j) = c;
            cov(j, i) = c;
        }
    }
    return cov;
}

std::vector<std::uint8_t> SelectionMask::w_s() const {
    std::vector<std::uint8_t> bits(w_star.size(), 0);
    for (int i : selected) bits[i] = 1;
    return bits;
}

SelectionMask select_features(const Eigen::MatrixXd& covariance, int k, int max_iters,
                              int n_random_starts, std::uint64_t seed) {
    const int n = static_cast<int>(covariance.rows());
    if (covariance.cols() != n) throw std::invalid_argument("covariance must be square");
    if (k < 1 || k > n) throw std::invalid_argument("k must be in [1, n]");

    const auto objective = [&](const Eigen::VectorXd& w) { return w.dot(covariance * w); };

    std::vector<std::vector<int>> starts;
    starts.push_back(top_k_indices(covariance.diagonal(), k));
    starts.push_back(top_k_indices(covariance.colwise().sum().transpose(), k));
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (int s = 0; s < n_random_starts; ++s) {
        std::vector<int> pick(all);
        for (int i = 0; i < k; ++i) {
            const std::size_t j = i + rng() % (pick.size() - i);
            std::swap(pick[i], pick[j]);
        }
        pick.resize(k);
        std::sort(pick.begin(), pick.end());
        starts.push_back(std::move(pick));
    }

    SelectionMask best;
    double best_obj = -1.0;
    for (const auto& start : starts) {
        std::vector<int> support = start;
        Eigen::VectorXd w = vertex(support, n, k);
        double obj = objective(w);
        std::vector<double> trace{obj};
        for (int it = 0; it < max_iters; ++it) {
            const Eigen::VectorXd grad = covariance * w;
            std::vector<int> next = top_k_indices(grad, k);
            if (next == support) break;
            const Eigen::VectorXd w_next = vertex(next, n, k);
            const double obj_next = objective(w_next);
            if (obj_next + 1e-12 * std::abs(obj) < obj) break;  // cannot happen for PSD C
            support = std::move(next);
            w = w_next;
            obj = obj_next;
            trace.push_back(obj);
        }

        // Greedy 1-swap refinement: still a monotone ascent on vertices, and
        // it escapes the fixed points the projection iteration stalls at.
        std::vector<std::uint8_t> in_support(n, 0);
        for (int i : support) in_support[i] = 1;
        Eigen::VectorXd colsum = Eigen::VectorXd::Zero(n);  // sum_{l in S} C(., l)
        for (int l : support) colsum += covariance.col(l);
        double q = obj * k * k;  // objective in submatrix-sum form
        for (int pass = 0; pass < max_iters; ++pass) {
            double best_delta = 0.0;
            int best_out = -1, best_in = -1;
            for (int i : support) {
                for (int j = 0; j < n; ++j) {
                    if (in_support[j]) continue;
                    const double delta = -2.0 * colsum[i] + covariance(i, i) + 2.0 * colsum[j] -
                                         2.0 * covariance(i, j) + covariance(j, j);
                    if (delta > best_delta + 1e-12 * std::abs(q)) {
                        best_delta = delta;
                        best_out = i;
                        best_in = j;
                    }
                }
            }
            if (best_out < 0) break;
            in_support[best_out] = 0;
            in_support[best_in] = 1;
            for (int& s : support) {
                if (s == best_out) s = best_in;
            }
            std::sort(support.begin(), support.end());
            colsum += covariance.col(best_in) - covariance.col(best_out);
            q += best_delta;
            trace.push_back(q / (k * k));
        }
        w = vertex(support, n, k);
        obj = objective(w);

        if (obj > best_obj) {
            best_obj = obj;
            best.w_star = w;
            best.selected = support;
            best.k = k;
            best.objective_trace = trace;
        }
    }
    return best;
}

Eigen::MatrixXd selected_design_matrix(const TrainingSet& data, const SelectionMask& selection) {
    const int m = data.size();
    const int k = static_cast<int>(selection.selected.size());
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(m, 1 + k);
    design.col(0).setOnes();
    std::vector<int> column_of(data.n_colors, -1);
    for (int j = 0; j < k; ++j) column_of[selection.selected[j]] = 1 + j;
    for (int i = 0; i < m; ++i) {
        for (std::uint16_t c : data.rows[i]) {
            const int col = column_of[c];
            if (col >= 0) design(i, col) = 1.0;
        }
    }
    return design;
}

RegressionModel train_regression(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                                 double lambda, const SelectionMask& selection) {
    if (design.rows() != labels.size()) throw std::invalid_argument("label count mismatch");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    const Eigen::Index dim = design.cols();
    Eigen::MatrixXd normal = design.transpose() * design;
    normal.diagonal().array() += lambda;
    const Eigen::VectorXd rhs = design.transpose() * labels;

    if (lambda == 0.0) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normal, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd ev = es.eigenvalues();
        const double emax = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (ev[i] > emax * dim * 1e-14) ++rank;
        }
        if (rank < dim) {
            throw std::runtime_error("rank-deficient system at lambda = 0: rank " +
                                     std::to_string(rank) + " < " + std::to_string(dim));
        }
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("normal-equation factorization failed");

    RegressionModel model;
    model.weights = ldlt.solve(rhs);
    model.lambda = lambda;
    model.selection = selection;
    return model;
}

SoftMask evaluate_dense(const QuantizedFrame& frame, const RegressionModel& model, int window) {
    if (window < 1) throw std::invalid_argument("empty window");
    const int w = frame.width, h = frame.height;
    const int r = window / 2;
    const double bias = model.weights[0];
    SoftMask out(w, h, bias);

    // Integral image of the per-color indicator, reused across colors.
    std::vector<std::int32_t> integral(static_cast<std::size_t>(w + 1) * (h + 1));
    const int stride = w + 1;
    for (std::size_t j = 0; j < model.selection.selected.size(); ++j) {
        const std::uint16_t color = static_cast<std::uint16_t>(model.selection.selected[j]);
        const double weight = model.weights[static_cast<Eigen::Index>(1 + j)];
        if (weight == 0.0) continue;
        for (int y = 0; y < h; ++y) {
            const std::uint16_t* row = frame.colors.data() + static_cast<std::size_t>(y) * w;
            std::int32_t run = 0;
            for (int x = 0; x < w; ++x) {
                run += row[x] == color;
                integral[static_cast<std::size_t>(y + 1) * stride + (x + 1)] =
                    integral[static_cast<std::size_t>(y) * stride + (x + 1)] + run;
            }
        }
        for (int y = 0; y < h; ++y) {
            const int y0 = std::max(0, y - r), y1 = std::min(h - 1, y + r);
            const std::int32_t* top = integral.data() + static_cast<std::size_t>(y0) * stride;
            const std::int32_t* bot = integral.data() + static_cast<std::size_t>(y1 + 1) * stride;
            double* dst = out.values.data() + static_cast<std::size_t>(y) * w;
            for (int x = 0; x < w; ++x) {
                const int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
                const std::int32_t cnt = bot[x1 + 1] - bot[x0] - top[x1 + 1] + top[x0];
                if (cnt > 0) dst[x] += weight;
            }
        }
    }
    for (double& v : out.values) v = std::clamp(v, 0.0, 1.0);
    return out;
}

}  // namespace hppseg

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "hppseg/color.hpp"
#include "hppseg/raster.hpp"

namespace hppseg {

// Color-occurrence descriptor of one patch window: which quantized colors
// appear anywhere inside it. Position and frequency inside the window are
// ignored.
struct PatchDescriptor {
    std::vector<std::uint16_t> present;  // sorted color indices with bit set
    int center_x = 0;
    int center_y = 0;
    int window = 0;

    bool has(int color) const;
};

PatchDescriptor extract_descriptor(const QuantizedFrame& frame, int center_x, int center_y,
                                   int window);

// Sparse binary descriptor matrix (one row per sample) plus soft labels.
struct TrainingSet {
    std::vector<std::vector<std::uint16_t>> rows;  // sorted present-color sets
    Eigen::VectorXd labels;                        // in [0,1]
    int n_colors = kColorCount;

    int size() const { return static_cast<int>(rows.size()); }
    Eigen::MatrixXd dense() const;  // m x n_colors, 0/1
};

// Samples descriptors on a regular grid over all frames; the label of a
// sample is the mask value at the window center. When the grid yields more
// than max_samples sites, a seeded uniform subsample (in deterministic frame
// order) is kept.
TrainingSet build_training_set(const std::vector<QuantizedFrame>& frames,
                               const std::vector<SoftMask>& masks, int grid_stride, int window,
                               int max_samples, std::uint64_t seed);

// Column-feature covariance C = centered(D)^T centered(D) / (m-1).
Eigen::MatrixXd color_covariance(const TrainingSet& data);

// Solution of the capped-simplex maximization of w^T C w
// (sum w = 1, 0 <= w_i <= 1/k): 1/k on the selected colors, 0 elsewhere.
struct SelectionMask {
    Eigen::VectorXd w_star;
    std::vector<int> selected;  // sorted indices where w_star > 0
    int k = 0;
    std::vector<double> objective_trace;  // accepted objective values of the winning start

    std::vector<std::uint8_t> w_s() const;  // binary mask over colors
};

// Monotone integer-projection ascent from several deterministic starts
// (largest-variance colors, largest column sums, seeded random supports);
// the best local optimum wins. For PSD C each projection step cannot
// decrease the objective, so every accepted iterate improves or ties.
SelectionMask select_features(const Eigen::MatrixXd& covariance, int k, int max_iters = 100,
                              int n_random_starts = 8, std::uint64_t seed = 0);

// m x (1+k) design matrix: leading 1s column, then presence bits of the
// selected colors.
Eigen::MatrixXd selected_design_matrix(const TrainingSet& data, const SelectionMask& selection);

struct RegressionModel {
    Eigen::VectorXd weights;  // bias first, then one weight per selected color
    double lambda = 0.0;
    SelectionMask selection;
};

// Closed-form ridge solve w = (lambda I + D^T D)^{-1} D^T s. Throws at
// lambda = 0 when the normal matrix is rank deficient.
RegressionModel train_regression(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                                 double lambda, const SelectionMask& selection);

// Evaluates the regression at every pixel: descriptor over the window
// centered there (clipped at borders), dot product with the weights plus
// bias, clamped to [0,1]. Runs on per-color presence maps, O(H*W*k).
SoftMask evaluate_dense(const QuantizedFrame& frame, const RegressionModel& model, int window);

}  // namespace hppseg

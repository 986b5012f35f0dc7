#pragma once

#include <Eigen/Core>
#include <vector>

#include "hppseg/raster.hpp"

namespace hppseg {

// Affine PCA subspace: mean plus orthonormal principal directions.
struct SubspaceModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;   // dim x n_components, orthonormal columns
    Eigen::VectorXd eigenvalues;  // descending, covariance scale

    int n_components() const { return static_cast<int>(components.cols()); }
    Eigen::Index dim() const { return mean.size(); }
};

// Fits the top n_components principal directions of `samples` (one flattened
// sample per row). Uses the Gram-matrix path when rows < columns. Eigenvector
// sign is fixed so the largest-magnitude entry is positive. Throws when
// n_components exceeds the effective rank (the message reports it).
SubspaceModel fit_pca(const Eigen::MatrixXd& samples, int n_components);

// Like fit_pca but lowers n_components to the effective rank instead of
// throwing; rank-0 data yields a mean-only model.
SubspaceModel fit_pca_auto(const Eigen::MatrixXd& samples, int n_components);

// Orthogonal projection onto the affine subspace.
Eigen::VectorXd reconstruct(const SubspaceModel& model, const Eigen::VectorXd& sample);

// Per-pixel |frame - reconstruction|.
SoftMask reconstruction_error(const SoftMask& frame, const SubspaceModel& model);

// Replaces each mask by its PCA reconstruction, clamped to [0,1], then
// smoothed with sigma2 (0 disables smoothing). Requested components are
// lowered gracefully when the stack has lower rank.
std::vector<SoftMask> project_masks(const std::vector<SoftMask>& masks, int n_components = 8,
                                    double sigma2 = 0.0);

Eigen::MatrixXd stack_masks(const std::vector<SoftMask>& masks);

}  // namespace hppseg

#include "hppseg/subspace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <string>

#include "hppseg/filters.hpp"

namespace hppseg {

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index best = 0;
    double mag = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > mag) {
            mag = a;
            best = i;
        }
    }
    if (v[best] < 0.0) v = -v;
}

struct EigenPairs {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // columns aligned with values
};

EigenPairs sorted_eigs(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    const Eigen::Index n = sym.rows();
    EigenPairs out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {  // ascending -> descending
        out.values[i] = es.eigenvalues()[n - 1 - i];
        out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return out;
}

SubspaceModel fit_impl(const Eigen::MatrixXd& samples, int n_components, bool clamp_to_rank) {
    const Eigen::Index m = samples.rows();
    const Eigen::Index d = samples.cols();
    if (m < 2) throw std::invalid_argument("fit_pca needs at least 2 samples");
    if (!clamp_to_rank && (n_components < 1 || n_components > m - 1)) {
        throw std::invalid_argument("n_components must be in [1, samples-1]");
    }

    SubspaceModel model;
    model.mean = samples.colwise().mean();
    Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();

    EigenPairs eigs;
    bool gram = m <= d;
    if (gram) {
        eigs = sorted_eigs(centered * centered.transpose());
    } else {
        eigs = sorted_eigs(centered.transpose() * centered);
    }

    const double top = std::max(eigs.values[0], 0.0);
    const double tol = std::max(static_cast<double>(std::max(m, d)), 1.0) * 1e-12 * top;
    int rank = 0;
    const int max_rank = static_cast<int>(std::min(m - 1, d));
    while (rank < max_rank && eigs.values[rank] > tol && eigs.values[rank] > 0.0) ++rank;

    if (n_components > rank) {
        if (!clamp_to_rank) {
            throw std::runtime_error("requested " + std::to_string(n_components) +
                                     " components but effective rank is " + std::to_string(rank));
        }
        n_components = rank;
    }

    model.components.resize(d, n_components);
    model.eigenvalues.resize(n_components);
    for (int i = 0; i < n_components; ++i) {
        if (gram) {
            Eigen::VectorXd u = centered.transpose() * eigs.vectors.col(i);
            u /= std::sqrt(eigs.values[i]);
            model.components.col(i) = u;
            model.eigenvalues[i] = eigs.values[i] / (m - 1);
        } else {
            model.components.col(i) = eigs.vectors.col(i);
            model.eigenvalues[i] = eigs.values[i] / (m - 1);
        }
        fix_sign(model.components.col(i));
    }
    return model;
}

}  // namespace

SubspaceModel fit_pca(const Eigen::MatrixXd& samples, int n_components) {
    return fit_impl(samples, n_components, false);
}

SubspaceModel fit_pca_auto(const Eigen::MatrixXd& samples, int n_components) {
    n_components = std::min<int>(n_components, static_cast<int>(samples.rows()) - 1);
    return fit_impl(samples, std::max(n_components, 0), true);
}

Eigen::VectorXd reconstruct(const SubspaceModel& model, const Eigen::VectorXd& sample) {
    if (sample.size() != model.dim()) {
        throw std::invalid_argument("sample length " + std::to_string(sample.size()) +
                                    " does not match model dimension " + std::to_string(model.dim()));
    }
    if (model.n_components() == 0) return model.mean;
    const Eigen::VectorXd coeffs = model.components.transpose() * (sample - model.mean);
    return model.mean + model.components * coeffs;
}

SoftMask reconstruction_error(const SoftMask& frame, const SubspaceModel& model) {
    if (static_cast<Eigen::Index>(frame.size()) != model.dim()) {
        throw std::invalid_argument("frame does not flatten to model dimension");
    }
    const Eigen::Map<const Eigen::VectorXd> flat(frame.values.data(), frame.size());
    const Eigen::VectorXd rec = reconstruct(model, flat);
    SoftMask out(frame.width, frame.height);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values[i] = std::abs(frame.values[i] - rec[static_cast<Eigen::Index>(i)]);
    }
    return out;
}

Eigen::MatrixXd stack_masks(const std::vector<SoftMask>& masks) {
    if (masks.empty()) throw std::invalid_argument("no masks to stack");
    Eigen::MatrixXd out(masks.size(), masks[0].size());
    for (std::size_t i = 0; i < masks.size(); ++i) {
        if (masks[i].size() != masks[0].size()) throw std::invalid_argument("mask size mismatch");
        out.row(i) = Eigen::Map<const Eigen::VectorXd>(masks[i].values.data(), masks[i].size());
    }
    return out;
}

std::vector<SoftMask> project_masks(const std::vector<SoftMask>& masks, int n_components,
                                    double sigma2) {
    const Eigen::MatrixXd stacked = stack_masks(masks);
    const SubspaceModel model = fit_pca_auto(stacked, n_components);
    std::vector<SoftMask> out(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const Eigen::VectorXd rec = reconstruct(model, stacked.row(i).transpose());
        SoftMask m(masks[i].width, masks[i].height);
        for (std::size_t j = 0; j < m.size(); ++j) {
            m.values[j] = std::clamp(rec[static_cast<Eigen::Index>(j)], 0.0, 1.0);
        }
        out[i] = sigma2 > 0.0 ? gaussian_smooth(m, sigma2) : std::move(m);
    }
    return out;
}

}  // namespace hppseg

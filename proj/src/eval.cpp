#include "hppseg/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace hppseg {

double iou_box(const BoundingBox& a, const BoundingBox& b) {
    const int ix0 = std::max(a.x, b.x);
    const int iy0 = std::max(a.y, b.y);
    const int ix1 = std::min(a.x + a.w, b.x + b.w);
    const int iy1 = std::min(a.y + a.h, b.y + b.h);
    const long long iw = std::max(0, ix1 - ix0);
    const long long ih = std::max(0, iy1 - iy0);
    const long long inter = iw * ih;
    const long long uni =
        static_cast<long long>(a.w) * a.h + static_cast<long long>(b.w) * b.h - inter;
    return uni > 0 ? static_cast<double>(inter) / uni : 0.0;
}

double corloc(const std::map<int, BoundingBox>& pred, const GroundTruth& gt, double thresh) {
    if (gt.boxes.empty()) throw std::invalid_argument("ground truth has no boxes");
    int correct = 0;
    for (const auto& [frame, instances] : gt.boxes) {
        const auto it = pred.find(frame);
        if (it == pred.end()) continue;
        double best = 0.0;
        for (const BoundingBox& g : instances) best = std::max(best, iou_box(it->second, g));
        if (best >= thresh) ++correct;
    }
    return 100.0 * correct / static_cast<double>(gt.boxes.size());
}

double iou_mask(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.width != gt.width || pred.height != gt.height) {
        throw std::invalid_argument("mask dimensions differ");
    }
    long long inter = 0, uni = 0;
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        const bool p = pred.values[i] != 0;
        const bool g = gt.values[i] != 0;
        inter += p && g;
        uni += p || g;
    }
    return uni > 0 ? static_cast<double>(inter) / uni : 1.0;
}

double average_iou(const std::vector<BinaryMask>& pred, const std::vector<BinaryMask>& gt) {
    if (pred.size() != gt.size() || pred.empty()) throw std::invalid_argument("frame count mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) sum += iou_mask(pred[i], gt[i]);
    return sum / pred.size();
}

Prf prf(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.width != gt.width || pred.height != gt.height) {
        throw std::invalid_argument("mask dimensions differ");
    }
    long long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        const bool p = pred.values[i] != 0;
        const bool g = gt.values[i] != 0;
        tp += p && g;
        fp += p && !g;
        fn += !p && g;
    }
    Prf out;
    out.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    out.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    out.f_measure = out.precision + out.recall > 0.0
                        ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                        : 0.0;
    return out;
}

}  // namespace hppseg

#pragma once

#include <map>
#include <vector>

#include "hppseg/raster.hpp"

namespace hppseg {

struct BoundingBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    bool empty_flag = false;  // set when no high-probability pixels existed
};

struct GroundTruth {
    std::map<int, std::vector<BoundingBox>> boxes;  // frame -> instances
    std::map<int, BinaryMask> masks;
};

// area(a & b) / area(a | b); 0 for disjoint boxes.
double iou_box(const BoundingBox& a, const BoundingBox& b);

// Percentage of annotated frames whose prediction reaches IoU >= thresh
// against the best ground-truth instance. Frames without a prediction count
// as incorrect.
double corloc(const std::map<int, BoundingBox>& pred, const GroundTruth& gt, double thresh = 0.5);

// |pred & gt| / |pred | gt|; both empty counts as 1.
double iou_mask(const BinaryMask& pred, const BinaryMask& gt);

double average_iou(const std::vector<BinaryMask>& pred, const std::vector<BinaryMask>& gt);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

// Pixel precision/recall/f-measure on the foreground class. Empty prediction
// has precision 0 by convention; f = 0 when P + R = 0.
Prf prf(const BinaryMask& pred, const BinaryMask& gt);

}  // namespace hppseg

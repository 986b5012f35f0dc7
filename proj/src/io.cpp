#include "hppseg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include <opencv2/imgcodecs.hpp>

namespace fs = std::filesystem;

namespace hppseg::io {

namespace {

bool has_frame_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

cv::Mat load_mat(const std::string& path, int flags) {
    cv::Mat m = cv::imread(path, flags);
    if (m.empty()) throw std::runtime_error("cannot read image: " + path);
    return m;
}

}  // namespace

std::vector<std::string> list_frame_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && has_frame_extension(entry.path())) {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

Image load_image(const std::string& path) {
    const cv::Mat bgr = load_mat(path, cv::IMREAD_COLOR);
    Image img(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            std::uint8_t* p = img.pixel(x, y);
            p[0] = row[x][2];
            p[1] = row[x][1];
            p[2] = row[x][0];
        }
    }
    return img;
}

FrameSequence load_frame_dir(const std::string& dir) {
    const std::vector<std::string> files = list_frame_files(dir);
    if (files.size() < 2) throw std::runtime_error("need at least 2 frames in " + dir);
    FrameSequence seq;
    seq.shot_id = fs::path(dir).filename().string();
    for (const std::string& f : files) {
        Image img = load_image(f);
        if (seq.frames.empty()) {
            seq.width = img.width;
            seq.height = img.height;
        } else if (img.width != seq.width || img.height != seq.height) {
            throw std::runtime_error("frame size mismatch: " + f + " is " +
                                     std::to_string(img.width) + "x" + std::to_string(img.height) +
                                     ", expected " + std::to_string(seq.width) + "x" +
                                     std::to_string(seq.height));
        }
        seq.frames.push_back(std::move(img));
    }
    return seq;
}

void save_image_png(const std::string& path, const Image& img) {
    cv::Mat bgr(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* p = img.pixel(x, y);
            row[x] = cv::Vec3b(p[2], p[1], p[0]);
        }
    }
    if (!cv::imwrite(path, bgr)) throw std::runtime_error("cannot write " + path);
}

void save_mask_png(const std::string& path, const SoftMask& mask) {
    cv::Mat gray(mask.height, mask.width, CV_8UC1);
    for (int y = 0; y < mask.height; ++y) {
        std::uint8_t* row = gray.ptr<std::uint8_t>(y);
        for (int x = 0; x < mask.width; ++x) {
            const double v = std::clamp(mask.at(x, y), 0.0, 1.0);
            row[x] = static_cast<std::uint8_t>(std::lround(255.0 * v));
        }
    }
    if (!cv::imwrite(path, gray)) throw std::runtime_error("cannot write " + path);
}

SoftMask load_mask_png(const std::string& path) {
    const cv::Mat gray = load_mat(path, cv::IMREAD_GRAYSCALE);
    SoftMask mask(gray.cols, gray.rows);
    for (int y = 0; y < gray.rows; ++y) {
        const std::uint8_t* row = gray.ptr<std::uint8_t>(y);
        for (int x = 0; x < gray.cols; ++x) mask.at(x, y) = row[x] / 255.0;
    }
    return mask;
}

BinaryMask load_binary_mask(const std::string& path) {
    const cv::Mat gray = load_mat(path, cv::IMREAD_GRAYSCALE);
    BinaryMask mask(gray.cols, gray.rows);
    for (int y = 0; y < gray.rows; ++y) {
        const std::uint8_t* row = gray.ptr<std::uint8_t>(y);
        for (int x = 0; x < gray.cols; ++x) mask.at(x, y) = row[x] != 0 ? 1 : 0;
    }
    return mask;
}

void save_trimap_png(const std::string& path, const Trimap& trimap) {
    cv::Mat gray(trimap.height, trimap.width, CV_8UC1);
    for (int y = 0; y < trimap.height; ++y) {
        std::uint8_t* row = gray.ptr<std::uint8_t>(y);
        for (int x = 0; x < trimap.width; ++x) {
            row[x] = trimap.values[static_cast<std::size_t>(y) * trimap.width + x];
        }
    }
    if (!cv::imwrite(path, gray)) throw std::runtime_error("cannot write " + path);
}

void save_frames(const std::string& dir, const FrameSequence& video) {
    fs::create_directories(dir);
    char name[32];
    for (std::size_t i = 0; i < video.frames.size(); ++i) {
        std::snprintf(name, sizeof(name), "%04zu.png", i);
        save_image_png((fs::path(dir) / name).string(), video.frames[i]);
    }
}

}  // namespace hppseg::io

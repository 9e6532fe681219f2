#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fusecue/errors.hpp"

namespace fusecue {

/// Rank-3 float tensor, channel-planar row-major: data[c*h*w + y*w + x].
/// The universal carrier for RGB frames, cue channels and activations.
struct ImageTensor {
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<float> data;

    ImageTensor() = default;
    ImageTensor(std::size_t c, std::size_t h, std::size_t w, float fill = 0.0f)
        : channels(c), height(h), width(w), data(c * h * w, fill) {}

    std::size_t size() const { return channels * height * width; }

    float& at(std::size_t c, std::size_t y, std::size_t x) {
        return data[(c * height + y) * width + x];
    }
    float at(std::size_t c, std::size_t y, std::size_t x) const {
        return data[(c * height + y) * width + x];
    }

    const float* plane(std::size_t c) const { return data.data() + c * height * width; }
    float* plane(std::size_t c) { return data.data() + c * height * width; }

    bool same_shape(const ImageTensor& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }
};

/// Per-channel affine normalization y = (x - mu) / sigma.
struct NormalizationSpec {
    double mu = 0.5;
    double sigma = 0.5;
};

enum class CueKind { WDF, LBP, Phase };

const char* cue_kind_name(CueKind k);
CueKind cue_kind_from_name(const std::string& name);

/// Single-channel cue map tagged with its kind. Values are guaranteed to lie
/// in the kind's contractual range ([-1,1] for WDF/Phase, [-1,0.8] for LBP).
struct CueChannel {
    CueKind kind = CueKind::WDF;
    ImageTensor tensor; // 1 x H x W
};

/// BT.601 luma: 0.299 R + 0.587 G + 0.114 B. Input must be 3xHxW.
ImageTensor to_grayscale(const ImageTensor& img);

/// y = (x - mu) / sigma applied to every value. sigma <= 0 -> InvalidSpec.
ImageTensor normalize(const ImageTensor& img, const NormalizationSpec& spec);

/// Inverse of normalize: x = y * sigma + mu.
ImageTensor denormalize(const ImageTensor& img, const NormalizationSpec& spec);

/// Throws InvalidShape if any value is NaN or infinite.
void check_finite(const ImageTensor& img, const char* what);

} // namespace fusecue

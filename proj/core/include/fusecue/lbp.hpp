#pragma once

#include <cstddef>

#include "fusecue/tensor.hpp"

namespace fusecue {

/// Uniform LBP configuration. radius=1, neighbors=8 is the supported
/// operating point; other values are accepted by lbp_codes but the 0..P+1
/// code range (and lbp_normalize) assumes the count-of-ones uniform mapping.
struct LbpConfig {
    double radius = 1.0;
    int neighbors = 8;
};

/// Rotation-invariant uniform LBP codes in {0..P+1}: patterns with at most
/// two circular 0<->1 transitions map to their count of set bits, everything
/// else to P+1. Neighbors are sampled on a radius-1 circle with bilinear
/// interpolation; comparison is neighbor >= center (ties are 1); borders use
/// a 1-pixel replicate pad so dims are preserved.
ImageTensor lbp_codes(const ImageTensor& img, const LbpConfig& cfg = {});

/// x_norm = x / (P + 2) * 2 - 1, mapping codes {0..9} into [-1, 0.8].
CueChannel lbp_normalize(const ImageTensor& codes, const LbpConfig& cfg = {});

/// lbp_normalize(lbp_codes(img)).
CueChannel lbp(const ImageTensor& img, const LbpConfig& cfg = {});

} // namespace fusecue

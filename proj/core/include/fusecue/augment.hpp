#pragma once

#include "fusecue/rng.hpp"
#include "fusecue/tensor.hpp"

namespace fusecue {

/// Stochastic training-time augmentation. Each transform is applied
/// independently with probability p_each, in the fixed order
/// flip -> rotate -> blur -> brightness/contrast -> jpeg. Applied to frames
/// BEFORE cue extraction so the cue channels see the distorted pixels.
struct AugmentConfig {
    double p_each = 0.5;
    double rotation_deg = 10.0;   // uniform in [-deg, +deg]
    int blur_kernel_min = 3;      // odd kernel sizes {3,5,7}
    int blur_kernel_max = 7;
    double brightness_contrast = 0.1; // +-10%
    int jpeg_quality_min = 40;
    int jpeg_quality_max = 100;
};

/// Applies the pipeline with draws from rng; same rng state, same output.
/// Parameter draws happen only for transforms whose coin lands "apply", in
/// pipeline order. Input values must be in [0,1]; output is clamped to [0,1].
ImageTensor augment(const ImageTensor& img, const AugmentConfig& cfg, Xoshiro256pp& rng);

// Individual transforms (deterministic given their parameters).
ImageTensor hflip(const ImageTensor& img);
ImageTensor rotate_bilinear(const ImageTensor& img, double degrees);
ImageTensor gaussian_blur(const ImageTensor& img, int kernel_size);
ImageTensor adjust_brightness_contrast(const ImageTensor& img, double brightness,
                                       double contrast);

/// In-process JPEG simulation: RGB->YCbCr, 8x8 block DCT per channel,
/// quantization with the standard tables scaled by quality, dequantize,
/// inverse DCT, YCbCr->RGB. No entropy coding (lossless, no pixel effect)
/// and no chroma subsampling.
ImageTensor jpeg_simulate(const ImageTensor& img, int quality);

/// Normalized 1-D Gaussian taps for kernel size k, sigma = 0.3*((k-1)/2 - 1) + 0.8.
std::vector<double> gaussian_kernel(int kernel_size);

} // namespace fusecue

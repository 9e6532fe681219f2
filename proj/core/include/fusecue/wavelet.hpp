#pragma once

#include <cstddef>
#include <vector>

#include "fusecue/tensor.hpp"

namespace fusecue {

/// One decomposition level of coefficient planes (f64). Orientation:
///   lh = lowpass along x, highpass along y (vertical detail)
///   hl = highpass along x, lowpass along y (horizontal detail)
///   hh = highpass in both directions
struct WaveletLevel {
    std::size_t rows = 0, cols = 0;      // plane dims (post-padding / 2)
    std::size_t in_rows = 0, in_cols = 0; // dims of the input that produced this level
    std::vector<double> lh, hl, hh;
};

/// Multi-level 2-D orthonormal Haar pyramid. Level k planes are
/// ceil(H/2^k) x ceil(W/2^k); odd inputs are symmetric-padded to even at
/// each level and the inverse crops back.
struct WaveletPyramid {
    std::size_t levels = 0;
    std::vector<WaveletLevel> detail;  // detail[0] is the finest level
    std::vector<double> ll;            // approximation at the coarsest level
    std::size_t ll_rows = 0, ll_cols = 0;

    void zero_details() {
        for (auto& lvl : detail) {
            std::fill(lvl.lh.begin(), lvl.lh.end(), 0.0);
            std::fill(lvl.hl.begin(), lvl.hl.end(), 0.0);
            std::fill(lvl.hh.begin(), lvl.hh.end(), 0.0);
        }
    }

    /// Sum of squares over LL and all detail planes (Parseval check helper).
    double energy() const;
};

/// Orthonormal Haar analysis: filters (1/sqrt2, 1/sqrt2) / (1/sqrt2, -1/sqrt2),
/// so a 2x2 block [a b; c d] yields LL=(a+b+c+d)/2, LH=(a+b-c-d)/2,
/// HL=(a-b+c-d)/2, HH=(a-b-c+d)/2. LL of level k feeds level k+1.
WaveletPyramid dwt2(const ImageTensor& img, std::size_t levels);

/// Perfect-reconstruction inverse; returns a 1xHxW tensor of the original dims.
ImageTensor idwt2(const WaveletPyramid& pyr);

/// Reconstruction with all detail planes zeroed, before any rescale (f64 out).
/// Exposed separately because several invariants are exact only pre-rescale.
std::vector<double> wdf_map(const ImageTensor& img, std::size_t levels,
                            std::size_t* out_h = nullptr, std::size_t* out_w = nullptr);

/// Wavelet-Denoised Feature: 3-level decomposition, details zeroed, inverse,
/// then per-image min-max rescale to [-1,1]. A constant input (degenerate
/// rescale) yields the all-zero channel.
CueChannel wdf(const ImageTensor& img, std::size_t levels = 3);

} // namespace fusecue

#pragma once

#include "fusecue/fft.hpp"
#include "fusecue/tensor.hpp"

namespace fusecue {

/// Phase-only channel: y = Re(IFFT(exp(i*angle(FFT(x))))).
/// Zero-magnitude bins get phase 0 (atan2(0,0) == 0), so their unit phasor
/// is 1. With the 1/(H*W) inverse scaling the output is bounded by 1 in
/// absolute value; no further rescale is applied. Invariant to positive
/// scaling of the input.
CueChannel phase_channel(const ImageTensor& img);

} // namespace fusecue

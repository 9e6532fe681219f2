#pragma once

#include <string>

#include "fusecue/tensor.hpp"

namespace fusecue {

// FCT1 tensor file:
//   bytes 0-3   magic "FCT1"
//   u32 LE      rank, always 3
//   u32 LE x3   dims C, H, W
//   f32 LE x N  values, channel-planar row-major, N = C*H*W
// No padding, no checksum. Empty tensors are rejected on both paths.

ImageTensor read_tensor(const std::string& path);
void write_tensor(const std::string& path, const ImageTensor& t);

/// Binary PGM (P5) or PPM (P6), 8-bit, maxval 255. Values scaled to [0,1].
/// PGM yields 1 channel, PPM yields 3.
ImageTensor read_image(const std::string& path);

/// Writes 1-channel tensors as PGM, 3-channel as PPM. Values are clamped to
/// [0,1] and quantized with round(v*255).
void write_image(const std::string& path, const ImageTensor& img);

/// Writes data to path via a sibling temp file + rename, so readers never
/// observe a partial artifact.
void atomic_write_file(const std::string& path, const std::string& data);

} // namespace fusecue

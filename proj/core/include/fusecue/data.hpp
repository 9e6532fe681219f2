#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fusecue/rng.hpp"
#include "fusecue/tensor.hpp"

namespace fusecue {

/// One labeled frame. Manifests are JSON-lines, one record per line.
struct SampleRecord {
    std::string video_id;
    long frame_index = 0;
    std::string path; // relative paths resolve against the manifest directory
    int label = 0;    // 0 real, 1 fake
    std::string dataset;
    std::string split; // "train" | "test"
};

/// Parses and validates a JSONL manifest. Enforces the leakage guard (no
/// video in both train and test of one dataset -> LeakageError) and rejects
/// duplicate (dataset, video, frame) triples and empty files (ManifestError).
std::vector<SampleRecord> load_manifest(const std::string& path);

void save_manifest(const std::string& path, const std::vector<SampleRecord>& records);

/// Uniformly spaced frame sampling: floor(j*N/k) for j=0..k-1, deduplicated;
/// all frames when N <= k. Output is strictly increasing and within [0, N).
std::vector<std::size_t> sample_frames(std::size_t n_frames, std::size_t k = 32);

/// Synthetic desk-scale benchmark. Real frames are seeded procedural textures
/// (smooth gradients + band-limited noise + fine texture, with slow per-frame
/// drift). Fake frames take a real frame and resample an interior square by a
/// non-integer factor, feather-blending it back — leaving up-sampling
/// artifacts, a blend-boundary low-frequency seam, and local texture
/// disruption.
struct SynthConfig {
    std::size_t n_videos = 40;        // total; alternating real/fake
    std::size_t frames_per_video = 8;
    std::size_t image_size = 64;
    std::size_t region_size = 24;     // manipulated square side
    double resize_factor = 1.7;       // must not be an integer
    double feather_radius = 2.0;
    double train_fraction = 0.7;      // video-level split
    std::string dataset_name = "synth";
    std::uint64_t seed = 1024;
};

SynthConfig synth_config_from_json(const std::string& text);
std::string synth_config_to_json(const SynthConfig& cfg);

/// Writes frames (PPM) under out_dir plus manifest.jsonl; returns the records.
std::vector<SampleRecord> generate_synthetic(const SynthConfig& cfg, const std::string& out_dir);

/// Renders one real frame (pre-manipulation) — exposed for the generator's
/// pixel-diff invariants.
ImageTensor synth_real_frame(const SynthConfig& cfg, std::uint64_t video_seed,
                             std::size_t frame_index);

/// Applies the manipulation in place; region position is drawn from rng.
/// Returns the manipulated-region bounding box {y0, x0, side}.
struct RegionBox {
    std::size_t y0 = 0, x0 = 0, side = 0;
};
RegionBox synth_manipulate(ImageTensor& frame, const SynthConfig& cfg, Xoshiro256pp& rng);

/// FNV-1a 64 digest of the manifest bytes, plus every referenced frame file
/// (in manifest order) when include_frames is set. Golden value for the
/// generator's determinism check.
std::uint64_t manifest_digest(const std::string& manifest_path, bool include_frames);

} // namespace fusecue

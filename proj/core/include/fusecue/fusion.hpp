#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fusecue/tensor.hpp"

namespace fusecue {

/// Pairwise fusion variants. Stream order is fixed (WDF first): w[0] always
/// multiplies the WDF channel, w[1] the complementary cue.
enum class FusionVariant { LFWS, LFWL };

const char* fusion_variant_name(FusionVariant v);
FusionVariant fusion_variant_from_name(const std::string& name);

/// Cue kind expected in the second stream (Phase for LFWS, LBP for LFWL).
CueKind fusion_complement(FusionVariant v);

/// The lightweight mixer: 1x1 convolution over two stacked cue channels
/// (two scalar weights, no bias), batch normalization, ReLU.
struct FusionBlockParams {
    FusionVariant variant = FusionVariant::LFWS;
    double w[2] = {0.0, 0.0};
    double bn_gamma = 1.0;
    double bn_beta = 0.0;
    double bn_mean = 0.0; // running statistics
    double bn_var = 1.0;
    double bn_eps = 1e-5;
    double bn_momentum = 0.9; // new = 0.9*old + 0.1*batch
    bool frozen = false;
};

enum class FusionMode { Train, Eval };

/// Batch mean/var (biased) of the pre-BN mix, supplied by the training loop
/// when a step covers more than one image.
struct FusionBatchStats {
    double mean = 0.0;
    double var = 0.0;
    std::size_t count = 0;
};

/// z = w0*a + w1*b per pixel; y = ReLU(gamma * (z-mu)/sqrt(var+eps) + beta).
/// Eval mode uses the running statistics. Train mode uses batch statistics:
/// either the supplied `batch_stats`, or — when none are given — statistics
/// of this image alone, in which case the running stats are updated here with
/// momentum (with explicit batch_stats the caller owns the running update via
/// update_running_stats, once per batch).
/// Throws InvalidShape on dim mismatch and FrozenViolation for frozen+train.
CueChannel fuse_forward(const CueChannel& a, const CueChannel& b, FusionBlockParams& p,
                        FusionMode mode,
                        const std::optional<FusionBatchStats>& batch_stats = std::nullopt);

/// new_running = momentum * old + (1 - momentum) * batch. The variance fed to
/// the running average uses the unbiased (count/(count-1)) batch estimate.
void update_running_stats(FusionBlockParams& p, const FusionBatchStats& stats);

/// Forward state needed by the backward pass (flattened over the batch).
struct FusionTrainCache {
    std::vector<double> a, b;      // inputs
    std::vector<double> xhat;      // normalized pre-affine values
    std::vector<double> preact;    // post-affine, pre-ReLU
    FusionBatchStats stats;
    double inv_std = 0.0;
};

struct FusionGrads {
    double dw[2] = {0.0, 0.0};
    double dgamma = 0.0;
    double dbeta = 0.0;
};

/// Train-mode batch forward in f64 (inputs flattened, a.size()==b.size()).
/// Computes batch stats over all values, caches everything backward needs,
/// and updates the running statistics unless update_running is false.
std::vector<double> fusion_train_forward(const std::vector<double>& a,
                                         const std::vector<double>& b,
                                         FusionBlockParams& p, FusionTrainCache& cache,
                                         bool update_running = true);

/// Backpropagates dL/dy through ReLU, batch norm (including the batch-stat
/// terms) and the mixer. Returns parameter gradients; input gradients are
/// written to da/db when non-null.
FusionGrads fusion_train_backward(const FusionTrainCache& cache, const FusionBlockParams& p,
                                  const std::vector<double>& dy,
                                  std::vector<double>* da = nullptr,
                                  std::vector<double>* db = nullptr);

/// Frozen-block JSON: {version:1, variant, w:[2], gamma, beta, running_mean,
/// running_var, eps}. Import marks the block frozen. Round-trips bit-exactly.
void export_frozen(const FusionBlockParams& p, const std::string& path);
FusionBlockParams import_frozen(const std::string& path);

std::string frozen_to_json(const FusionBlockParams& p);
FusionBlockParams frozen_from_json(const std::string& json_text);

/// Trainable-parameter overhead of adding one fused input channel to a
/// backbone: extra first-conv weights + mixer weights + BN affine pair.
struct ParamCount {
    long first_conv_delta = 0; // extra_input_channels * first_conv_out * k*k
    long mixer_weights = 0;    // one per fused stream, no bias
    long bn_affine = 2;        // gamma, beta
    long total() const { return first_conv_delta + mixer_weights + bn_affine; }
};

ParamCount count_additional_params(long first_conv_out = 32, long kernel = 3,
                                   long extra_input_channels = 1, long mixer_inputs = 2);

} // namespace fusecue

#include "fusecue/fusion.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "fusecue/tensor_io.hpp"

namespace fusecue {

const char* fusion_variant_name(FusionVariant v) {
    return v == FusionVariant::LFWS ? "LFWS" : "LFWL";
}

FusionVariant fusion_variant_from_name(const std::string& name) {
    if (name == "LFWS" || name == "lfws") return FusionVariant::LFWS;
    if (name == "LFWL" || name == "lfwl") return FusionVariant::LFWL;
    throw InvalidSpec("unknown fusion variant '" + name + "'");
}

CueKind fusion_complement(FusionVariant v) {
    return v == FusionVariant::LFWS ? CueKind::Phase : CueKind::LBP;
}

namespace {

void validate_params(const FusionBlockParams& p) {
    if (p.bn_var < 0.0) throw InvalidSpec("fusion block: bn_var must be >= 0");
    if (p.bn_eps < 0.0) throw InvalidSpec("fusion block: bn_eps must be >= 0");
    if (p.bn_var + p.bn_eps <= 0.0)
        throw InvalidSpec("fusion block: bn_var + bn_eps must be positive");
}

void validate_streams(const CueChannel& a, const CueChannel& b, const FusionBlockParams& p) {
    if (!a.tensor.same_shape(b.tensor))
        throw InvalidShape("fuse_forward: stream dims differ");
    if (a.tensor.channels != 1)
        throw InvalidShape("fuse_forward: cue channels must be single-plane");
    if (a.kind != CueKind::WDF)
        throw InvalidSpec("fuse_forward: first stream must be WDF");
    if (b.kind != fusion_complement(p.variant))
        throw InvalidSpec(std::string("fuse_forward: second stream must be ") +
                          cue_kind_name(fusion_complement(p.variant)) + " for " +
                          fusion_variant_name(p.variant));
}

} // namespace

CueChannel fuse_forward(const CueChannel& a, const CueChannel& b, FusionBlockParams& p,
                        FusionMode mode, const std::optional<FusionBatchStats>& batch_stats) {
    validate_streams(a, b, p);
    validate_params(p);
    if (mode == FusionMode::Train && p.frozen)
        throw FrozenViolation("train-mode forward through a frozen fusion block");

    const std::size_t n = a.tensor.size();
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i)
        z[i] = p.w[0] * static_cast<double>(a.tensor.data[i]) +
               p.w[1] * static_cast<double>(b.tensor.data[i]);

    double mean, var;
    if (mode == FusionMode::Eval) {
        mean = p.bn_mean;
        var = p.bn_var;
    } else if (batch_stats.has_value()) {
        mean = batch_stats->mean;
        var = batch_stats->var;
    } else {
        // batch of one image: statistics over its pixels
        double s = 0.0;
        for (double v : z) s += v;
        mean = s / static_cast<double>(n);
        double sq = 0.0;
        for (double v : z) sq += (v - mean) * (v - mean);
        var = sq / static_cast<double>(n);
        update_running_stats(p, FusionBatchStats{mean, var, n});
    }

    const double inv_std = 1.0 / std::sqrt(var + p.bn_eps);
    CueChannel out;
    out.kind = CueKind::WDF; // fused map takes the WDF slot downstream
    out.tensor = ImageTensor(1, a.tensor.height, a.tensor.width);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = p.bn_gamma * (z[i] - mean) * inv_std + p.bn_beta;
        out.tensor.data[i] = static_cast<float>(y > 0.0 ? y : 0.0);
    }
    check_finite(out.tensor, "fuse_forward");
    return out;
}

void update_running_stats(FusionBlockParams& p, const FusionBatchStats& stats) {
    if (p.frozen) throw FrozenViolation("running-stat update on a frozen fusion block");
    const double m = p.bn_momentum;
    const double unbiased = stats.count > 1
        ? stats.var * static_cast<double>(stats.count) / static_cast<double>(stats.count - 1)
        : stats.var;
    p.bn_mean = m * p.bn_mean + (1.0 - m) * stats.mean;
    p.bn_var = m * p.bn_var + (1.0 - m) * unbiased;
}

std::vector<double> fusion_train_forward(const std::vector<double>& a,
                                         const std::vector<double>& b,
                                         FusionBlockParams& p, FusionTrainCache& cache,
                                         bool update_running) {
    if (a.size() != b.size() || a.empty())
        throw InvalidShape("fusion_train_forward: stream sizes differ or empty");
    if (p.frozen) throw FrozenViolation("train-mode forward through a frozen fusion block");
    validate_params(p);

    const std::size_t n = a.size();
    cache.a = a;
    cache.b = b;
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = p.w[0] * a[i] + p.w[1] * b[i];

    double s = 0.0;
    for (double v : z) s += v;
    const double mean = s / static_cast<double>(n);
    double sq = 0.0;
    for (double v : z) sq += (v - mean) * (v - mean);
    const double var = sq / static_cast<double>(n);

    cache.stats = {mean, var, n};
    cache.inv_std = 1.0 / std::sqrt(var + p.bn_eps);
    cache.xhat.resize(n);
    cache.preact.resize(n);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cache.xhat[i] = (z[i] - mean) * cache.inv_std;
        cache.preact[i] = p.bn_gamma * cache.xhat[i] + p.bn_beta;
        out[i] = cache.preact[i] > 0.0 ? cache.preact[i] : 0.0;
    }
    if (update_running) update_running_stats(p, cache.stats);
    return out;
}

FusionGrads fusion_train_backward(const FusionTrainCache& cache, const FusionBlockParams& p,
                                  const std::vector<double>& dy,
                                  std::vector<double>* da, std::vector<double>* db) {
    const std::size_t n = cache.a.size();
    if (dy.size() != n) throw InvalidShape("fusion_train_backward: gradient size mismatch");

    FusionGrads g;
    std::vector<double> dpre(n);
    for (std::size_t i = 0; i < n; ++i) {
        dpre[i] = cache.preact[i] > 0.0 ? dy[i] : 0.0;
        g.dbeta += dpre[i];
        g.dgamma += dpre[i] * cache.xhat[i];
    }

    // batch-norm backward through the batch statistics
    const double inv_n = 1.0 / static_cast<double>(n);
    double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
    std::vector<double> dxhat(n);
    for (std::size_t i = 0; i < n; ++i) {
        dxhat[i] = dpre[i] * p.bn_gamma;
        sum_dxhat += dxhat[i];
        sum_dxhat_xhat += dxhat[i] * cache.xhat[i];
    }
    std::vector<double> dz(n);
    for (std::size_t i = 0; i < n; ++i)
        dz[i] = cache.inv_std *
                (dxhat[i] - inv_n * sum_dxhat - inv_n * cache.xhat[i] * sum_dxhat_xhat);

    if (da) da->assign(n, 0.0);
    if (db) db->assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        g.dw[0] += dz[i] * cache.a[i];
        g.dw[1] += dz[i] * cache.b[i];
        if (da) (*da)[i] = dz[i] * p.w[0];
        if (db) (*db)[i] = dz[i] * p.w[1];
    }
    return g;
}

namespace {

using nlohmann::json;

} // namespace

std::string frozen_to_json(const FusionBlockParams& p) {
    json j;
    j["version"] = 1;
    j["variant"] = fusion_variant_name(p.variant);
    j["w"] = {p.w[0], p.w[1]};
    j["gamma"] = p.bn_gamma;
    j["beta"] = p.bn_beta;
    j["running_mean"] = p.bn_mean;
    j["running_var"] = p.bn_var;
    j["eps"] = p.bn_eps;
    return j.dump(2) + "\n";
}

FusionBlockParams frozen_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("frozen block: invalid JSON: ") + e.what());
    }
    try {
        if (!j.contains("version") || j["version"].get<int>() != 1)
            throw FormatError("frozen block: unsupported or missing version");
        FusionBlockParams p;
        p.variant = fusion_variant_from_name(j.at("variant").get<std::string>());
        const auto& w = j.at("w");
        if (!w.is_array() || w.size() != 2)
            throw FormatError("frozen block: expected exactly 2 mixer weights, got " +
                              std::to_string(w.size()));
        p.w[0] = w[0].get<double>();
        p.w[1] = w[1].get<double>();
        p.bn_gamma = j.at("gamma").get<double>();
        p.bn_beta = j.at("beta").get<double>();
        p.bn_mean = j.at("running_mean").get<double>();
        p.bn_var = j.at("running_var").get<double>();
        p.bn_eps = j.at("eps").get<double>();
        if (p.bn_eps <= 0.0) throw FormatError("frozen block: eps must be positive");
        if (p.bn_var < 0.0) throw FormatError("frozen block: running_var must be >= 0");
        p.frozen = true;
        return p;
    } catch (const json::exception& e) {
        throw FormatError(std::string("frozen block: ") + e.what());
    }
}

void export_frozen(const FusionBlockParams& p, const std::string& path) {
    if (p.bn_eps <= 0.0) throw InvalidSpec("export_frozen: eps must be positive");
    atomic_write_file(path, frozen_to_json(p));
}

FusionBlockParams import_frozen(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open frozen block '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return frozen_from_json(text);
}

ParamCount count_additional_params(long first_conv_out, long kernel,
                                   long extra_input_channels, long mixer_inputs) {
    if (first_conv_out < 0 || kernel < 1 || extra_input_channels < 0 || mixer_inputs < 0)
        throw InvalidSpec("count_additional_params: negative or zero-kernel input");
    ParamCount c;
    c.first_conv_delta = extra_input_channels * first_conv_out * kernel * kernel;
    c.mixer_weights = mixer_inputs;
    c.bn_affine = 2;
    return c;
}

} // namespace fusecue

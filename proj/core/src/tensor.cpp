#include "fusecue/tensor.hpp"

#include <cmath>
#include <string>

namespace fusecue {

const char* cue_kind_name(CueKind k) {
    switch (k) {
        case CueKind::WDF: return "wdf";
        case CueKind::LBP: return "lbp";
        case CueKind::Phase: return "phase";
    }
    return "?";
}

CueKind cue_kind_from_name(const std::string& name) {
    if (name == "wdf") return CueKind::WDF;
    if (name == "lbp") return CueKind::LBP;
    if (name == "phase" || name == "spsl") return CueKind::Phase;
    throw InvalidSpec("unknown cue kind '" + name + "'");
}

ImageTensor to_grayscale(const ImageTensor& img) {
    if (img.channels != 3)
        throw InvalidShape("to_grayscale expects 3 channels, got " +
                           std::to_string(img.channels));
    ImageTensor out(1, img.height, img.width);
    const float* r = img.plane(0);
    const float* g = img.plane(1);
    const float* b = img.plane(2);
    const std::size_t n = img.height * img.width;
    for (std::size_t i = 0; i < n; ++i) {
        // f64 accumulation, f32 storage
        double y = 0.299 * static_cast<double>(r[i]) +
                   0.587 * static_cast<double>(g[i]) +
                   0.114 * static_cast<double>(b[i]);
        out.data[i] = static_cast<float>(y);
    }
    check_finite(out, "to_grayscale");
    return out;
}

ImageTensor normalize(const ImageTensor& img, const NormalizationSpec& spec) {
    if (!(spec.sigma > 0.0))
        throw InvalidSpec("normalize: sigma must be > 0");
    ImageTensor out(img.channels, img.height, img.width);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = static_cast<float>((static_cast<double>(img.data[i]) - spec.mu) / spec.sigma);
    check_finite(out, "normalize");
    return out;
}

ImageTensor denormalize(const ImageTensor& img, const NormalizationSpec& spec) {
    if (!(spec.sigma > 0.0))
        throw InvalidSpec("denormalize: sigma must be > 0");
    ImageTensor out(img.channels, img.height, img.width);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = static_cast<float>(static_cast<double>(img.data[i]) * spec.sigma + spec.mu);
    check_finite(out, "denormalize");
    return out;
}

void check_finite(const ImageTensor& img, const char* what) {
    for (float v : img.data)
        if (!std::isfinite(v))
            throw InvalidShape(std::string(what) + ": non-finite value in tensor");
}

} // namespace fusecue

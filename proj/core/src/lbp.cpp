#include "fusecue/lbp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

namespace fusecue {

namespace {

struct SampleOffset {
    int iy, ix;      // integer base cell
    double fy, fx;   // fractional position within the cell
};

// Sample points at angles 2*pi*k/P on the circle, y axis pointing down.
std::vector<SampleOffset> circle_offsets(double radius, int neighbors) {
    std::vector<SampleOffset> offs(neighbors);
    for (int k = 0; k < neighbors; ++k) {
        const double ang = 2.0 * 3.14159265358979323846 * k / neighbors;
        double dx = radius * std::cos(ang);
        double dy = -radius * std::sin(ang);
        // snap near-integer coordinates so axis-aligned samples hit pixels exactly
        if (std::abs(dx - std::round(dx)) < 1e-9) dx = std::round(dx);
        if (std::abs(dy - std::round(dy)) < 1e-9) dy = std::round(dy);
        offs[k].iy = static_cast<int>(std::floor(dy));
        offs[k].ix = static_cast<int>(std::floor(dx));
        offs[k].fy = dy - offs[k].iy;
        offs[k].fx = dx - offs[k].ix;
    }
    return offs;
}

} // namespace

ImageTensor lbp_codes(const ImageTensor& img, const LbpConfig& cfg) {
    if (img.channels != 1)
        throw InvalidShape("lbp_codes expects a single-channel image");
    if (cfg.neighbors < 2 || cfg.neighbors > 32)
        throw InvalidSpec("lbp_codes: neighbors out of range");
    if (!(cfg.radius > 0.0))
        throw InvalidSpec("lbp_codes: radius must be positive");

    const int h = static_cast<int>(img.height);
    const int w = static_cast<int>(img.width);
    const int pad = static_cast<int>(std::ceil(cfg.radius)) + 1;

    // replicate-pad once; keeps the sampling loop branch-free
    const int ph = h + 2 * pad, pw = w + 2 * pad;
    std::vector<double> padded(static_cast<std::size_t>(ph) * pw);
    for (int y = 0; y < ph; ++y) {
        const int sy = std::min(std::max(y - pad, 0), h - 1);
        for (int x = 0; x < pw; ++x) {
            const int sx = std::min(std::max(x - pad, 0), w - 1);
            padded[static_cast<std::size_t>(y) * pw + x] = img.data[static_cast<std::size_t>(sy) * w + sx];
        }
    }

    const auto offs = circle_offsets(cfg.radius, cfg.neighbors);
    const int P = cfg.neighbors;
    ImageTensor codes(1, img.height, img.width);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double center = padded[static_cast<std::size_t>(y + pad) * pw + (x + pad)];
            unsigned bits = 0;
            for (int k = 0; k < P; ++k) {
                const SampleOffset& o = offs[k];
                const int by = y + pad + o.iy;
                const int bx = x + pad + o.ix;
                const double v00 = padded[static_cast<std::size_t>(by) * pw + bx];
                double v;
                if (o.fy == 0.0 && o.fx == 0.0) {
                    v = v00;
                } else {
                    const double v01 = padded[static_cast<std::size_t>(by) * pw + bx + 1];
                    const double v10 = padded[static_cast<std::size_t>(by + 1) * pw + bx];
                    const double v11 = padded[static_cast<std::size_t>(by + 1) * pw + bx + 1];
                    // incremental form: exact when all four corners are equal
                    v = v00 + o.fx * (v01 - v00) + o.fy * (v10 - v00) +
                        o.fx * o.fy * (v00 + v11 - v01 - v10);
                }
                if (v >= center) bits |= 1u << k;
            }
            // circular transition count decides uniform vs non-uniform
            int transitions = 0;
            for (int k = 0; k < P; ++k) {
                const unsigned a = (bits >> k) & 1u;
                const unsigned b = (bits >> ((k + 1) % P)) & 1u;
                transitions += static_cast<int>(a ^ b);
            }
            int code;
            if (transitions <= 2)
                code = static_cast<int>(std::popcount(bits));
            else
                code = P + 1;
            codes.at(0, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) =
                static_cast<float>(code);
        }
    }
    return codes;
}

CueChannel lbp_normalize(const ImageTensor& codes, const LbpConfig& cfg) {
    if (codes.channels != 1)
        throw InvalidShape("lbp_normalize expects a single-channel code map");
    const int P = cfg.neighbors;
    CueChannel cue;
    cue.kind = CueKind::LBP;
    cue.tensor = ImageTensor(1, codes.height, codes.width);
    const double denom = static_cast<double>(P + 2);
    for (std::size_t i = 0; i < codes.data.size(); ++i) {
        const double x = static_cast<double>(codes.data[i]);
        if (x < 0.0 || x > static_cast<double>(P + 1) || x != std::floor(x))
            throw InvalidCode("lbp_normalize: code " + std::to_string(x) + " outside {0.." +
                              std::to_string(P + 1) + "}");
        cue.tensor.data[i] = static_cast<float>(x / denom * 2.0 - 1.0);
    }
    return cue;
}

CueChannel lbp(const ImageTensor& img, const LbpConfig& cfg) {
    return lbp_normalize(lbp_codes(img, cfg), cfg);
}

} // namespace fusecue

#include "fusecue/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fusecue {

namespace {

// symmetric (half-sample) reflection of an integer index into [0, n)
std::size_t reflect_index(long i, long n) {
    if (n == 1) return 0;
    const long period = 2 * n;
    long m = i % period;
    if (m < 0) m += period;
    if (m >= n) m = period - 1 - m;
    return static_cast<std::size_t>(m);
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

} // namespace

std::vector<double> gaussian_kernel(int kernel_size) {
    if (kernel_size < 1 || kernel_size % 2 == 0)
        throw InvalidSpec("gaussian_kernel: size must be odd and positive");
    const double sigma = 0.3 * ((kernel_size - 1) * 0.5 - 1.0) + 0.8;
    std::vector<double> k(kernel_size);
    const int c = kernel_size / 2;
    double sum = 0.0;
    for (int i = 0; i < kernel_size; ++i) {
        const double d = i - c;
        k[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

ImageTensor hflip(const ImageTensor& img) {
    ImageTensor out(img.channels, img.height, img.width);
    for (std::size_t c = 0; c < img.channels; ++c)
        for (std::size_t y = 0; y < img.height; ++y)
            for (std::size_t x = 0; x < img.width; ++x)
                out.at(c, y, x) = img.at(c, y, img.width - 1 - x);
    return out;
}

ImageTensor rotate_bilinear(const ImageTensor& img, double degrees) {
    const double rad = degrees * 3.14159265358979323846 / 180.0;
    const double ca = std::cos(rad), sa = std::sin(rad);
    const double cy = (static_cast<double>(img.height) - 1.0) * 0.5;
    const double cx = (static_cast<double>(img.width) - 1.0) * 0.5;
    const long h = static_cast<long>(img.height), w = static_cast<long>(img.width);

    ImageTensor out(img.channels, img.height, img.width);
    for (std::size_t y = 0; y < img.height; ++y) {
        for (std::size_t x = 0; x < img.width; ++x) {
            // inverse map: sample the source at the back-rotated position
            const double dx = static_cast<double>(x) - cx;
            const double dy = static_cast<double>(y) - cy;
            const double sx = cx + ca * dx + sa * dy;
            const double sy = cy - sa * dx + ca * dy;
            const double fx0 = std::floor(sx), fy0 = std::floor(sy);
            const double ax = sx - fx0, ay = sy - fy0;
            const long ix = static_cast<long>(fx0), iy = static_cast<long>(fy0);
            const std::size_t x0 = reflect_index(ix, w), x1 = reflect_index(ix + 1, w);
            const std::size_t y0 = reflect_index(iy, h), y1 = reflect_index(iy + 1, h);
            for (std::size_t c = 0; c < img.channels; ++c) {
                const double v00 = img.at(c, y0, x0), v01 = img.at(c, y0, x1);
                const double v10 = img.at(c, y1, x0), v11 = img.at(c, y1, x1);
                const double v = (1 - ay) * ((1 - ax) * v00 + ax * v01) +
                                 ay * ((1 - ax) * v10 + ax * v11);
                out.at(c, y, x) = static_cast<float>(clamp01(v));
            }
        }
    }
    return out;
}

ImageTensor gaussian_blur(const ImageTensor& img, int kernel_size) {
    const std::vector<double> k = gaussian_kernel(kernel_size);
    const int c_off = kernel_size / 2;
    const long h = static_cast<long>(img.height), w = static_cast<long>(img.width);

    ImageTensor tmp(img.channels, img.height, img.width);
    for (std::size_t c = 0; c < img.channels; ++c)
        for (long y = 0; y < h; ++y)
            for (long x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int t = 0; t < kernel_size; ++t)
                    acc += k[t] * img.at(c, static_cast<std::size_t>(y),
                                         reflect_index(x + t - c_off, w));
                tmp.at(c, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) =
                    static_cast<float>(acc);
            }
    ImageTensor out(img.channels, img.height, img.width);
    for (std::size_t c = 0; c < img.channels; ++c)
        for (long y = 0; y < h; ++y)
            for (long x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int t = 0; t < kernel_size; ++t)
                    acc += k[t] * tmp.at(c, reflect_index(y + t - c_off, h),
                                         static_cast<std::size_t>(x));
                out.at(c, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) =
                    static_cast<float>(clamp01(acc));
            }
    return out;
}

ImageTensor adjust_brightness_contrast(const ImageTensor& img, double brightness,
                                       double contrast) {
    ImageTensor out(img.channels, img.height, img.width);
    double mean = 0.0;
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = static_cast<float>(static_cast<double>(img.data[i]) * (1.0 + brightness));
        mean += out.data[i];
    }
    mean /= static_cast<double>(out.data.size());
    for (float& v : out.data)
        v = static_cast<float>(clamp01((static_cast<double>(v) - mean) * (1.0 + contrast) + mean));
    return out;
}

namespace {

// ITU-T T.81 Annex K quantization tables.
constexpr std::array<int, 64> kLumaQ = {
    16, 11, 10, 16, 24,  40,  51,  61,
    12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,
    14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,
    24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101,
    72, 92, 95, 98, 112, 100, 103, 99};

constexpr std::array<int, 64> kChromaQ = {
    17, 18, 24, 47, 99, 99, 99, 99,
    18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99,
    47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99};

std::array<int, 64> scaled_quant_table(const std::array<int, 64>& base, int quality) {
    // IJG quality scaling
    const int s = quality < 50 ? 5000 / quality : 200 - 2 * quality;
    std::array<int, 64> q{};
    for (int i = 0; i < 64; ++i)
        q[i] = std::clamp((base[i] * s + 50) / 100, 1, 255);
    return q;
}

struct Dct8 {
    double basis[8][8]; // basis[u][x] = C(u)/2 * cos((2x+1)u pi / 16)
    Dct8() {
        for (int u = 0; u < 8; ++u) {
            const double cu = (u == 0) ? 1.0 / std::sqrt(2.0) : 1.0;
            for (int x = 0; x < 8; ++x)
                basis[u][x] = 0.5 * cu * std::cos((2 * x + 1) * u * 3.14159265358979323846 / 16.0);
        }
    }
};

const Dct8& dct8() {
    static const Dct8 d;
    return d;
}

void dct_block(const double in[8][8], double out[8][8]) {
    const Dct8& d = dct8();
    double mid[8][8];
    for (int u = 0; u < 8; ++u)
        for (int x = 0; x < 8; ++x) {
            double s = 0.0;
            for (int y = 0; y < 8; ++y) s += d.basis[u][y] * in[y][x];
            mid[u][x] = s;
        }
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
            double s = 0.0;
            for (int x = 0; x < 8; ++x) s += d.basis[v][x] * mid[u][x];
            out[u][v] = s;
        }
}

void idct_block(const double in[8][8], double out[8][8]) {
    const Dct8& d = dct8();
    double mid[8][8];
    for (int u = 0; u < 8; ++u)
        for (int x = 0; x < 8; ++x) {
            double s = 0.0;
            for (int v = 0; v < 8; ++v) s += d.basis[v][x] * in[u][v];
            mid[u][x] = s;
        }
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            double s = 0.0;
            for (int u = 0; u < 8; ++u) s += d.basis[u][y] * mid[u][x];
            out[y][x] = s;
        }
}

// One channel in the [-128, 127] JPEG domain, replicate-padded to 8x8 blocks.
void jpeg_channel(std::vector<double>& plane, std::size_t h, std::size_t w,
                  const std::array<int, 64>& q) {
    const std::size_t bh = (h + 7) / 8 * 8, bw = (w + 7) / 8 * 8;
    for (std::size_t by = 0; by < bh; by += 8) {
        for (std::size_t bx = 0; bx < bw; bx += 8) {
            double block[8][8], coef[8][8];
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    const std::size_t sy = std::min(by + y, h - 1);
                    const std::size_t sx = std::min(bx + x, w - 1);
                    block[y][x] = plane[sy * w + sx];
                }
            dct_block(block, coef);
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    const double qv = static_cast<double>(q[y * 8 + x]);
                    coef[y][x] = std::round(coef[y][x] / qv) * qv;
                }
            idct_block(coef, block);
            for (int y = 0; y < 8 && by + y < h; ++y)
                for (int x = 0; x < 8 && bx + x < w; ++x)
                    plane[(by + y) * w + bx + x] = block[y][x];
        }
    }
}

} // namespace

ImageTensor jpeg_simulate(const ImageTensor& img, int quality) {
    if (quality < 1 || quality > 100)
        throw InvalidSpec("jpeg_simulate: quality must be in [1,100]");
    if (img.channels != 1 && img.channels != 3)
        throw InvalidShape("jpeg_simulate: need 1 or 3 channels");

    const std::size_t h = img.height, w = img.width, n = h * w;
    const auto luma_q = scaled_quant_table(kLumaQ, quality);
    const auto chroma_q = scaled_quant_table(kChromaQ, quality);

    ImageTensor out(img.channels, h, w);
    if (img.channels == 1) {
        std::vector<double> yp(n);
        for (std::size_t i = 0; i < n; ++i) yp[i] = img.data[i] * 255.0 - 128.0;
        jpeg_channel(yp, h, w, luma_q);
        for (std::size_t i = 0; i < n; ++i) out.data[i] = static_cast<float>(clamp01((yp[i] + 128.0) / 255.0));
        return out;
    }

    std::vector<double> yp(n), cb(n), cr(n);
    const float* r = img.plane(0);
    const float* g = img.plane(1);
    const float* b = img.plane(2);
    for (std::size_t i = 0; i < n; ++i) {
        const double R = r[i] * 255.0, G = g[i] * 255.0, B = b[i] * 255.0;
        yp[i] = 0.299 * R + 0.587 * G + 0.114 * B - 128.0;
        cb[i] = -0.168735892 * R - 0.331264108 * G + 0.5 * B;
        cr[i] = 0.5 * R - 0.418687589 * G - 0.081312411 * B;
    }
    jpeg_channel(yp, h, w, luma_q);
    jpeg_channel(cb, h, w, chroma_q);
    jpeg_channel(cr, h, w, chroma_q);
    for (std::size_t i = 0; i < n; ++i) {
        const double Y = yp[i] + 128.0;
        const double R = Y + 1.402 * cr[i];
        const double G = Y - 0.344136286 * cb[i] - 0.714136286 * cr[i];
        const double B = Y + 1.772 * cb[i];
        out.plane(0)[i] = static_cast<float>(clamp01(R / 255.0));
        out.plane(1)[i] = static_cast<float>(clamp01(G / 255.0));
        out.plane(2)[i] = static_cast<float>(clamp01(B / 255.0));
    }
    return out;
}

ImageTensor augment(const ImageTensor& img, const AugmentConfig& cfg, Xoshiro256pp& rng) {
    if (cfg.p_each < 0.0 || cfg.p_each > 1.0)
        throw InvalidSpec("augment: p_each must be in [0,1]");
    if (cfg.blur_kernel_min % 2 == 0 || cfg.blur_kernel_max % 2 == 0 ||
        cfg.blur_kernel_min < 1 || cfg.blur_kernel_max < cfg.blur_kernel_min)
        throw InvalidSpec("augment: blur kernel bounds must be odd and ordered");
    if (cfg.jpeg_quality_min < 1 || cfg.jpeg_quality_max > 100 ||
        cfg.jpeg_quality_max < cfg.jpeg_quality_min)
        throw InvalidSpec("augment: jpeg quality bounds out of range");

    ImageTensor cur = img;
    if (rng.coin(cfg.p_each)) cur = hflip(cur);
    if (rng.coin(cfg.p_each)) {
        const double deg = rng.uniform(-cfg.rotation_deg, cfg.rotation_deg);
        cur = rotate_bilinear(cur, deg);
    }
    if (rng.coin(cfg.p_each)) {
        const int steps = (cfg.blur_kernel_max - cfg.blur_kernel_min) / 2;
        const int k = cfg.blur_kernel_min + 2 * static_cast<int>(rng.range(0, steps));
        cur = gaussian_blur(cur, k);
    }
    if (rng.coin(cfg.p_each)) {
        const double u = rng.uniform(-cfg.brightness_contrast, cfg.brightness_contrast);
        const double v = rng.uniform(-cfg.brightness_contrast, cfg.brightness_contrast);
        cur = adjust_brightness_contrast(cur, u, v);
    }
    if (rng.coin(cfg.p_each)) {
        const int q = static_cast<int>(rng.range(cfg.jpeg_quality_min, cfg.jpeg_quality_max));
        cur = jpeg_simulate(cur, q);
    }
    check_finite(cur, "augment");
    return cur;
}

} // namespace fusecue

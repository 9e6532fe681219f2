#include "fusecue/wavelet.hpp"

#include <algorithm>
#include <cmath>

namespace fusecue {

namespace {

// Symmetric (edge-replicating) pad to even dims, pywt-style: [a b c] -> [a b c c].
std::vector<double> pad_even(const std::vector<double>& in, std::size_t rows, std::size_t cols,
                             std::size_t& prows, std::size_t& pcols) {
    prows = rows + (rows % 2);
    pcols = cols + (cols % 2);
    if (prows == rows && pcols == cols) return in;
    std::vector<double> out(prows * pcols);
    for (std::size_t y = 0; y < prows; ++y) {
        std::size_t sy = std::min(y, rows - 1);
        for (std::size_t x = 0; x < pcols; ++x) {
            std::size_t sx = std::min(x, cols - 1);
            out[y * pcols + x] = in[sy * cols + sx];
        }
    }
    return out;
}

// One analysis level on an even-dim plane. Output planes are (rows/2, cols/2).
void haar_level(const std::vector<double>& in, std::size_t rows, std::size_t cols,
                std::vector<double>& ll, std::vector<double>& lh,
                std::vector<double>& hl, std::vector<double>& hh) {
    const std::size_t hr = rows / 2, hc = cols / 2;
    ll.assign(hr * hc, 0.0);
    lh.assign(hr * hc, 0.0);
    hl.assign(hr * hc, 0.0);
    hh.assign(hr * hc, 0.0);
    for (std::size_t by = 0; by < hr; ++by) {
        for (std::size_t bx = 0; bx < hc; ++bx) {
            const double a = in[(2 * by) * cols + 2 * bx];
            const double b = in[(2 * by) * cols + 2 * bx + 1];
            const double c = in[(2 * by + 1) * cols + 2 * bx];
            const double d = in[(2 * by + 1) * cols + 2 * bx + 1];
            // separable orthonormal Haar == 2x2 block transform with factor 1/2
            ll[by * hc + bx] = 0.5 * (a + b + c + d);
            lh[by * hc + bx] = 0.5 * (a + b - c - d);
            hl[by * hc + bx] = 0.5 * (a - b + c - d);
            hh[by * hc + bx] = 0.5 * (a - b - c + d);
        }
    }
}

void haar_level_inverse(const std::vector<double>& ll, const std::vector<double>& lh,
                        const std::vector<double>& hl, const std::vector<double>& hh,
                        std::size_t hr, std::size_t hc, std::vector<double>& out) {
    const std::size_t rows = 2 * hr, cols = 2 * hc;
    out.assign(rows * cols, 0.0);
    for (std::size_t by = 0; by < hr; ++by) {
        for (std::size_t bx = 0; bx < hc; ++bx) {
            const double s = ll[by * hc + bx];
            const double v = lh[by * hc + bx];
            const double h = hl[by * hc + bx];
            const double d = hh[by * hc + bx];
            out[(2 * by) * cols + 2 * bx] = 0.5 * (s + v + h + d);
            out[(2 * by) * cols + 2 * bx + 1] = 0.5 * (s + v - h - d);
            out[(2 * by + 1) * cols + 2 * bx] = 0.5 * (s - v + h - d);
            out[(2 * by + 1) * cols + 2 * bx + 1] = 0.5 * (s - v - h + d);
        }
    }
}

std::vector<double> crop(const std::vector<double>& in, std::size_t rows, std::size_t cols,
                         std::size_t to_rows, std::size_t to_cols) {
    if (rows == to_rows && cols == to_cols) return in;
    std::vector<double> out(to_rows * to_cols);
    for (std::size_t y = 0; y < to_rows; ++y)
        for (std::size_t x = 0; x < to_cols; ++x)
            out[y * to_cols + x] = in[y * cols + x];
    return out;
}

double plane_energy(const std::vector<double>& p) {
    double e = 0.0;
    for (double v : p) e += v * v;
    return e;
}

} // namespace

double WaveletPyramid::energy() const {
    double e = plane_energy(ll);
    for (const auto& lvl : detail)
        e += plane_energy(lvl.lh) + plane_energy(lvl.hl) + plane_energy(lvl.hh);
    return e;
}

WaveletPyramid dwt2(const ImageTensor& img, std::size_t levels) {
    if (img.channels != 1)
        throw InvalidShape("dwt2 expects a single-channel image");
    if (levels < 1) throw InvalidSpec("dwt2: levels must be >= 1");
    if (img.height < 2 || img.width < 2)
        throw InvalidShape("dwt2: image smaller than 2x2");

    std::vector<double> cur(img.size());
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = static_cast<double>(img.data[i]);
    std::size_t rows = img.height, cols = img.width;

    WaveletPyramid pyr;
    pyr.levels = levels;
    pyr.detail.resize(levels);
    for (std::size_t k = 0; k < levels; ++k) {
        std::size_t prows, pcols;
        std::vector<double> padded = pad_even(cur, rows, cols, prows, pcols);
        WaveletLevel& lvl = pyr.detail[k];
        lvl.in_rows = rows;
        lvl.in_cols = cols;
        lvl.rows = prows / 2;
        lvl.cols = pcols / 2;
        std::vector<double> ll;
        haar_level(padded, prows, pcols, ll, lvl.lh, lvl.hl, lvl.hh);
        cur = std::move(ll);
        rows = lvl.rows;
        cols = lvl.cols;
        if (k + 1 < levels && (rows < 1 || cols < 1))
            throw InvalidShape("dwt2: image too small for requested levels");
    }
    pyr.ll = std::move(cur);
    pyr.ll_rows = rows;
    pyr.ll_cols = cols;
    return pyr;
}

ImageTensor idwt2(const WaveletPyramid& pyr) {
    if (pyr.levels == 0 || pyr.detail.size() != pyr.levels)
        throw InvalidShape("idwt2: malformed pyramid");
    std::vector<double> cur = pyr.ll;
    std::size_t rows = pyr.ll_rows, cols = pyr.ll_cols;
    for (std::size_t k = pyr.levels; k-- > 0;) {
        const WaveletLevel& lvl = pyr.detail[k];
        if (rows != lvl.rows || cols != lvl.cols ||
            lvl.lh.size() != lvl.rows * lvl.cols ||
            lvl.hl.size() != lvl.rows * lvl.cols ||
            lvl.hh.size() != lvl.rows * lvl.cols)
            throw InvalidShape("idwt2: mismatched plane dims at level " + std::to_string(k));
        std::vector<double> up;
        haar_level_inverse(cur, lvl.lh, lvl.hl, lvl.hh, lvl.rows, lvl.cols, up);
        cur = crop(up, 2 * lvl.rows, 2 * lvl.cols, lvl.in_rows, lvl.in_cols);
        rows = lvl.in_rows;
        cols = lvl.in_cols;
    }
    ImageTensor out(1, rows, cols);
    for (std::size_t i = 0; i < cur.size(); ++i) out.data[i] = static_cast<float>(cur[i]);
    check_finite(out, "idwt2");
    return out;
}

std::vector<double> wdf_map(const ImageTensor& img, std::size_t levels,
                            std::size_t* out_h, std::size_t* out_w) {
    WaveletPyramid pyr = dwt2(img, levels);
    pyr.zero_details();
    // inverse in f64 without the f32 cast of idwt2
    std::vector<double> cur = pyr.ll;
    for (std::size_t k = pyr.levels; k-- > 0;) {
        const WaveletLevel& lvl = pyr.detail[k];
        std::vector<double> up;
        haar_level_inverse(cur, lvl.lh, lvl.hl, lvl.hh, lvl.rows, lvl.cols, up);
        cur = crop(up, 2 * lvl.rows, 2 * lvl.cols, lvl.in_rows, lvl.in_cols);
    }
    if (out_h) *out_h = img.height;
    if (out_w) *out_w = img.width;
    return cur;
}

CueChannel wdf(const ImageTensor& img, std::size_t levels) {
    std::vector<double> recon = wdf_map(img, levels);
    auto [mn_it, mx_it] = std::minmax_element(recon.begin(), recon.end());
    const double mn = *mn_it, mx = *mx_it;
    CueChannel cue;
    cue.kind = CueKind::WDF;
    cue.tensor = ImageTensor(1, img.height, img.width);
    if (mx > mn) {
        const double scale = 2.0 / (mx - mn);
        for (std::size_t i = 0; i < recon.size(); ++i)
            cue.tensor.data[i] = static_cast<float>((recon[i] - mn) * scale - 1.0);
    }
    // degenerate (constant) input: all zeros, the neutral value in [-1,1]
    check_finite(cue.tensor, "wdf");
    return cue;
}

} // namespace fusecue

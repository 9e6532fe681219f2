#include "fusecue/fft.hpp"

#include <cmath>

#include "fusecue/errors.hpp"

namespace fusecue {

namespace {

const double kPi = 3.14159265358979323846264338327950288;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Iterative Cooley-Tukey, n a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

// Bluestein's algorithm for arbitrary n, built on a power-of-two convolution.
// Chirp exponents are reduced mod 2n so the twiddle angles stay small.
void fft_bluestein(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    const std::size_t m = next_pow2(2 * n - 1);
    const double sign = inverse ? 1.0 : -1.0;

    std::vector<std::complex<double>> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t k2 = (static_cast<unsigned long long>(k) * k) % (2 * n);
        const double ang = sign * kPi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = std::complex<double>(std::cos(ang), std::sin(ang));
    }

    std::vector<std::complex<double>> fa(m, {0.0, 0.0}), fb(m, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) fa[k] = a[k] * chirp[k];
    fb[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) fb[k] = fb[m - k] = std::conj(chirp[k]);

    fft_pow2(fa, false);
    fft_pow2(fb, false);
    for (std::size_t i = 0; i < m; ++i) fa[i] *= fb[i];
    fft_pow2(fa, true);

    for (std::size_t k = 0; k < n; ++k) a[k] = fa[k] * chirp[k];
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

void transform_rows(Spectrum& s, bool inverse) {
    std::vector<std::complex<double>> row(s.cols);
    for (std::size_t y = 0; y < s.rows; ++y) {
        for (std::size_t x = 0; x < s.cols; ++x) row[x] = s.at(y, x);
        fft_1d(row, inverse);
        for (std::size_t x = 0; x < s.cols; ++x) s.at(y, x) = row[x];
    }
}

void transform_cols(Spectrum& s, bool inverse) {
    std::vector<std::complex<double>> col(s.rows);
    for (std::size_t x = 0; x < s.cols; ++x) {
        for (std::size_t y = 0; y < s.rows; ++y) col[y] = s.at(y, x);
        fft_1d(col, inverse);
        for (std::size_t y = 0; y < s.rows; ++y) s.at(y, x) = col[y];
    }
}

} // namespace

void fft_1d(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (is_pow2(n))
        fft_pow2(a, inverse);
    else
        fft_bluestein(a, inverse);
}

Spectrum fft2(const std::vector<double>& plane, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0 || plane.size() != rows * cols)
        throw InvalidShape("fft2: plane size does not match dims");
    Spectrum s;
    s.rows = rows;
    s.cols = cols;
    s.bins.resize(rows * cols);
    for (std::size_t i = 0; i < plane.size(); ++i) s.bins[i] = {plane[i], 0.0};
    transform_rows(s, false);
    transform_cols(s, false);
    return s;
}

Spectrum fft2(const Spectrum& in) {
    Spectrum s = in;
    transform_rows(s, false);
    transform_cols(s, false);
    return s;
}

Spectrum ifft2(const Spectrum& spec) {
    Spectrum s = spec;
    transform_rows(s, true); // each pass scales by 1/cols
    transform_cols(s, true); // and 1/rows, combined 1/(rows*cols)
    return s;
}

} // namespace fusecue

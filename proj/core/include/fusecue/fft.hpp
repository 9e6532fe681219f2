#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fusecue {

/// 2-D complex spectrum. Convention: forward transform is unnormalized,
/// inverse is scaled by 1/(rows*cols), so ifft2(fft2(x)) == x.
struct Spectrum {
    std::size_t rows = 0, cols = 0;
    std::vector<std::complex<double>> bins; // row-major

    std::complex<double>& at(std::size_t y, std::size_t x) { return bins[y * cols + x]; }
    const std::complex<double>& at(std::size_t y, std::size_t x) const { return bins[y * cols + x]; }
};

/// In-place 1-D FFT of arbitrary length: iterative radix-2 for powers of two,
/// Bluestein's chirp-z otherwise. inverse=true applies conjugate twiddles and
/// scales by 1/n.
void fft_1d(std::vector<std::complex<double>>& a, bool inverse);

Spectrum fft2(const std::vector<double>& plane, std::size_t rows, std::size_t cols);
Spectrum fft2(const Spectrum& in); // forward on complex input

/// Inverse with 1/(rows*cols) scaling.
Spectrum ifft2(const Spectrum& spec);

} // namespace fusecue

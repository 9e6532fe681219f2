#include "fusecue/phase.hpp"

#include <cmath>

namespace fusecue {

CueChannel phase_channel(const ImageTensor& img) {
    if (img.channels != 1)
        throw InvalidShape("phase_channel expects a single-channel image");
    std::vector<double> plane(img.size());
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = static_cast<double>(img.data[i]);

    Spectrum spec = fft2(plane, img.height, img.width);
    for (auto& bin : spec.bins) {
        const double ang = std::atan2(bin.imag(), bin.real());
        bin = {std::cos(ang), std::sin(ang)};
    }
    Spectrum recon = ifft2(spec);

    CueChannel cue;
    cue.kind = CueKind::Phase;
    cue.tensor = ImageTensor(1, img.height, img.width);
    for (std::size_t i = 0; i < recon.bins.size(); ++i)
        cue.tensor.data[i] = static_cast<float>(recon.bins[i].real());
    check_finite(cue.tensor, "phase_channel");
    return cue;
}

} // namespace fusecue

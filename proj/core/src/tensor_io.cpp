#include "fusecue/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace fusecue {

namespace {

constexpr char kMagic[4] = {'F', 'C', 'T', '1'};

void put_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof()) throw IoError("read failed on '" + path + "'");
    return data;
}

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

} // namespace

void atomic_write_file(const std::string& path, const std::string& data) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) throw IoError("write failed on '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("rename '" + tmp.string() + "' -> '" + path + "': " + ec.message());
}

void write_tensor(const std::string& path, const ImageTensor& t) {
    if (t.size() == 0 || t.data.size() != t.size())
        throw FormatError("write_tensor: empty or inconsistent tensor");
    std::string buf;
    buf.reserve(20 + 4 * t.size());
    buf.append(kMagic, 4);
    put_u32_le(buf, 3);
    put_u32_le(buf, static_cast<std::uint32_t>(t.channels));
    put_u32_le(buf, static_cast<std::uint32_t>(t.height));
    put_u32_le(buf, static_cast<std::uint32_t>(t.width));
    for (float v : t.data) {
        std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
        put_u32_le(buf, bits);
    }
    atomic_write_file(path, buf);
}

ImageTensor read_tensor(const std::string& path) {
    std::string buf = read_file(path);
    if (buf.size() < 20) throw FormatError("'" + path + "': truncated FCT1 header");
    if (std::memcmp(buf.data(), kMagic, 4) != 0)
        throw FormatError("'" + path + "': bad magic, expected FCT1");
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
    std::uint32_t rank = get_u32_le(p + 4);
    if (rank != 3) throw FormatError("'" + path + "': unsupported rank " + std::to_string(rank));
    std::uint32_t c = get_u32_le(p + 8);
    std::uint32_t h = get_u32_le(p + 12);
    std::uint32_t w = get_u32_le(p + 16);
    std::uint64_t n = static_cast<std::uint64_t>(c) * h * w;
    if (n == 0) throw FormatError("'" + path + "': empty tensor rejected");
    if (buf.size() != 20 + 4 * n)
        throw FormatError("'" + path + "': payload size mismatch (truncated or trailing bytes)");
    ImageTensor t(c, h, w);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint32_t bits = get_u32_le(p + 20 + 4 * i);
        t.data[i] = std::bit_cast<float>(bits);
    }
    return t;
}

namespace {

// PNM header token reader: skips whitespace and '#' comments.
std::size_t next_token(const std::string& buf, std::size_t pos, std::string& tok) {
    while (pos < buf.size()) {
        char ch = buf[pos];
        if (ch == '#') {
            while (pos < buf.size() && buf[pos] != '\n') ++pos;
        } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    std::size_t start = pos;
    while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
    tok = buf.substr(start, pos - start);
    return pos;
}

} // namespace

ImageTensor read_image(const std::string& path) {
    std::string buf = read_file(path);
    if (buf.size() < 2) throw FormatError("'" + path + "': not a PNM file");
    std::string magic, ws, hs, maxs;
    std::size_t pos = next_token(buf, 0, magic);
    if (magic != "P5" && magic != "P6")
        throw FormatError("'" + path + "': unsupported magic '" + magic + "' (want P5/P6)");
    pos = next_token(buf, pos, ws);
    pos = next_token(buf, pos, hs);
    pos = next_token(buf, pos, maxs);
    std::size_t w = 0, h = 0;
    unsigned long maxval = 0;
    try {
        w = std::stoul(ws);
        h = std::stoul(hs);
        maxval = std::stoul(maxs);
    } catch (const std::exception&) {
        throw FormatError("'" + path + "': malformed PNM header");
    }
    if (maxval != 255)
        throw FormatError("'" + path + "': only maxval 255 supported, got " + std::to_string(maxval));
    if (w == 0 || h == 0) throw FormatError("'" + path + "': zero image dims");
    if (pos >= buf.size() || !std::isspace(static_cast<unsigned char>(buf[pos])))
        throw FormatError("'" + path + "': malformed PNM header");
    ++pos; // single whitespace byte separates header from raster

    const std::size_t channels = (magic == "P6") ? 3 : 1;
    const std::size_t need = w * h * channels;
    if (buf.size() - pos < need)
        throw FormatError("'" + path + "': truncated raster");
    ImageTensor img(channels, h, w);
    const auto* raster = reinterpret_cast<const unsigned char*>(buf.data() + pos);
    // PNM raster is pixel-interleaved; tensor storage is channel-planar.
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            for (std::size_t c = 0; c < channels; ++c)
                img.at(c, y, x) = static_cast<float>(raster[(y * w + x) * channels + c]) / 255.0f;
    return img;
}

void write_image(const std::string& path, const ImageTensor& img) {
    if (img.channels != 1 && img.channels != 3)
        throw InvalidShape("write_image: need 1 or 3 channels, got " +
                           std::to_string(img.channels));
    if (img.size() == 0) throw InvalidShape("write_image: empty image");
    std::string buf;
    buf += (img.channels == 3) ? "P6\n" : "P5\n";
    buf += std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x)
            for (std::size_t c = 0; c < img.channels; ++c) {
                double v = std::clamp(static_cast<double>(img.at(c, y, x)), 0.0, 1.0);
                buf.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
            }
    atomic_write_file(path, buf);
}

} // namespace fusecue

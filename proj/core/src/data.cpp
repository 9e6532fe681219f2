#include "fusecue/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fusecue/augment.hpp"
#include "fusecue/tensor_io.hpp"

namespace fusecue {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::size_t> sample_frames(std::size_t n_frames, std::size_t k) {
    std::vector<std::size_t> out;
    if (n_frames == 0 || k == 0) return out;
    if (n_frames <= k) {
        out.resize(n_frames);
        for (std::size_t i = 0; i < n_frames; ++i) out[i] = i;
        return out;
    }
    out.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t idx = j * n_frames / k; // floor
        if (out.empty() || out.back() != idx) out.push_back(idx);
    }
    return out;
}

std::vector<SampleRecord> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path + "'");

    std::vector<SampleRecord> records;
    std::map<std::pair<std::string, std::string>, std::string> video_split;
    std::set<std::tuple<std::string, std::string, long>> seen;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ManifestError("'" + path + "' line " + std::to_string(line_no) +
                                ": invalid JSON: " + e.what());
        }
        SampleRecord r;
        try {
            r.video_id = j.at("video_id").get<std::string>();
            r.frame_index = j.at("frame_index").get<long>();
            r.path = j.at("path").get<std::string>();
            r.label = j.at("label").get<int>();
            r.dataset = j.at("dataset").get<std::string>();
            r.split = j.at("split").get<std::string>();
        } catch (const json::exception& e) {
            throw ManifestError("'" + path + "' line " + std::to_string(line_no) + ": " + e.what());
        }
        if (r.video_id.empty() || r.path.empty() || r.dataset.empty())
            throw ManifestError("'" + path + "' line " + std::to_string(line_no) +
                                ": empty video_id/path/dataset");
        if (r.frame_index < 0)
            throw ManifestError("'" + path + "' line " + std::to_string(line_no) +
                                ": negative frame_index");
        if (r.label != 0 && r.label != 1)
            throw ManifestError("'" + path + "' line " + std::to_string(line_no) +
                                ": label must be 0 or 1");
        if (r.split != "train" && r.split != "test")
            throw ManifestError("'" + path + "' line " + std::to_string(line_no) +
                                ": split must be train or test");

        if (!seen.insert({r.dataset, r.video_id, r.frame_index}).second)
            throw ManifestError("'" + path + "' line " + std::to_string(line_no) +
                                ": duplicate frame (" + r.video_id + ", " +
                                std::to_string(r.frame_index) + ")");
        auto key = std::make_pair(r.dataset, r.video_id);
        auto it = video_split.find(key);
        if (it == video_split.end()) {
            video_split.emplace(key, r.split);
        } else if (it->second != r.split) {
            throw LeakageError("'" + path + "': video '" + r.video_id + "' of dataset '" +
                               r.dataset + "' appears in both train and test");
        }
        records.push_back(std::move(r));
    }
    if (records.empty()) throw ManifestError("'" + path + "': no records");
    return records;
}

void save_manifest(const std::string& path, const std::vector<SampleRecord>& records) {
    std::string buf;
    for (const auto& r : records) {
        json j;
        j["video_id"] = r.video_id;
        j["frame_index"] = r.frame_index;
        j["path"] = r.path;
        j["label"] = r.label;
        j["dataset"] = r.dataset;
        j["split"] = r.split;
        buf += j.dump();
        buf += '\n';
    }
    atomic_write_file(path, buf);
}

SynthConfig synth_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("synth config: invalid JSON: ") + e.what());
    }
    SynthConfig cfg;
    cfg.n_videos = j.value("n_videos", cfg.n_videos);
    cfg.frames_per_video = j.value("frames_per_video", cfg.frames_per_video);
    cfg.image_size = j.value("image_size", cfg.image_size);
    cfg.region_size = j.value("region_size", cfg.region_size);
    cfg.resize_factor = j.value("resize_factor", cfg.resize_factor);
    cfg.feather_radius = j.value("feather_radius", cfg.feather_radius);
    cfg.train_fraction = j.value("train_fraction", cfg.train_fraction);
    cfg.dataset_name = j.value("dataset_name", cfg.dataset_name);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

std::string synth_config_to_json(const SynthConfig& cfg) {
    json j;
    j["n_videos"] = cfg.n_videos;
    j["frames_per_video"] = cfg.frames_per_video;
    j["image_size"] = cfg.image_size;
    j["region_size"] = cfg.region_size;
    j["resize_factor"] = cfg.resize_factor;
    j["feather_radius"] = cfg.feather_radius;
    j["train_fraction"] = cfg.train_fraction;
    j["dataset_name"] = cfg.dataset_name;
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

namespace {

void validate_synth(const SynthConfig& cfg) {
    if (cfg.n_videos < 4) throw InvalidSpec("synth: need at least 4 videos");
    if (cfg.frames_per_video == 0) throw InvalidSpec("synth: frames_per_video must be > 0");
    if (cfg.image_size < 16) throw InvalidSpec("synth: image_size must be >= 16");
    if (cfg.region_size < 4 || cfg.region_size + 4 > cfg.image_size)
        throw InvalidSpec("synth: region_size must fit the frame interior");
    if (cfg.resize_factor == std::floor(cfg.resize_factor))
        throw InvalidSpec("synth: resize_factor must not be an integer");
    if (cfg.resize_factor <= 1.0) throw InvalidSpec("synth: resize_factor must exceed 1");
    if (cfg.feather_radius < 0.0) throw InvalidSpec("synth: feather_radius must be >= 0");
    if (cfg.train_fraction <= 0.0 || cfg.train_fraction >= 1.0)
        throw InvalidSpec("synth: train_fraction must be in (0,1)");
}

// Texture recipe drawn once per video; phases drift per frame.
struct VideoTexture {
    double base, grad_amp, grad_angle;
    double wave_amp[2], wave_freq[2], wave_angle[2], wave_phase[2];
    double tex_amp, tex_fx, tex_fy, tex_phase;
    double noise_amp;
    double drift;
    double tint[3], gain;
};

VideoTexture draw_video_texture(std::uint64_t video_seed) {
    Xoshiro256pp rng(derive_seed(video_seed, 0xA0));
    VideoTexture t;
    t.base = rng.uniform(0.38, 0.55);
    t.grad_amp = rng.uniform(0.10, 0.22);
    t.grad_angle = rng.uniform(0.0, 6.283185307179586);
    for (int i = 0; i < 2; ++i) {
        t.wave_amp[i] = rng.uniform(0.04, 0.10);
        t.wave_freq[i] = rng.uniform(0.7, 2.2); // cycles per image
        t.wave_angle[i] = rng.uniform(0.0, 6.283185307179586);
        t.wave_phase[i] = rng.uniform(0.0, 6.283185307179586);
    }
    t.tex_amp = rng.uniform(0.050, 0.085);
    t.tex_fx = rng.uniform(0.18, 0.34);  // cycles per pixel
    t.tex_fy = rng.uniform(0.18, 0.34);
    t.tex_phase = rng.uniform(0.0, 6.283185307179586);
    t.noise_amp = rng.uniform(0.015, 0.035);
    t.drift = rng.uniform(0.02, 0.08);
    for (double& c : t.tint) c = rng.uniform(0.85, 1.15);
    t.gain = rng.uniform(0.82, 1.18);
    return t;
}

} // namespace

ImageTensor synth_real_frame(const SynthConfig& cfg, std::uint64_t video_seed,
                             std::size_t frame_index) {
    const VideoTexture t = draw_video_texture(video_seed);
    const std::size_t s = cfg.image_size;
    const double fi = static_cast<double>(frame_index);

    // band-limited noise: per-frame white noise, blurred
    Xoshiro256pp frame_rng(derive_seed(video_seed, 0xF0, frame_index));
    ImageTensor noise(1, s, s);
    for (float& v : noise.data) v = static_cast<float>(frame_rng.uniform(-1.0, 1.0));
    noise = gaussian_blur(noise, 5);

    ImageTensor img(3, s, s);
    const double inv = 1.0 / static_cast<double>(s);
    for (std::size_t y = 0; y < s; ++y) {
        for (std::size_t x = 0; x < s; ++x) {
            const double u = x * inv, v = y * inv;
            double L = t.base;
            L += t.grad_amp * ((u - 0.5) * std::cos(t.grad_angle + 0.01 * fi) +
                               (v - 0.5) * std::sin(t.grad_angle + 0.01 * fi));
            for (int i = 0; i < 2; ++i) {
                const double proj = u * std::cos(t.wave_angle[i]) + v * std::sin(t.wave_angle[i]);
                L += t.wave_amp[i] *
                     std::sin(6.283185307179586 * t.wave_freq[i] * proj + t.wave_phase[i] +
                              t.drift * fi);
            }
            L += t.tex_amp * std::sin(6.283185307179586 * (t.tex_fx * x + t.tex_fy * y) +
                                      t.tex_phase + t.drift * fi);
            L += t.noise_amp * noise.at(0, y, x);
            for (std::size_t c = 0; c < 3; ++c) {
                const double val = std::clamp(L * t.gain * t.tint[c], 0.0, 1.0);
                img.at(c, y, x) = static_cast<float>(val);
            }
        }
    }
    return img;
}

namespace {

// Bilinear resize with pixel-center mapping; used up and back down.
std::vector<double> resize_plane(const std::vector<double>& in, std::size_t n, std::size_t m) {
    std::vector<double> out(m * m);
    const double scale = static_cast<double>(n) / static_cast<double>(m);
    for (std::size_t y = 0; y < m; ++y) {
        for (std::size_t x = 0; x < m; ++x) {
            const double sy = (y + 0.5) * scale - 0.5;
            const double sx = (x + 0.5) * scale - 0.5;
            const double fy = std::floor(sy), fx = std::floor(sx);
            const double ay = sy - fy, ax = sx - fx;
            const long iy = static_cast<long>(fy), ix = static_cast<long>(fx);
            auto cl = [&](long i) {
                return static_cast<std::size_t>(std::clamp<long>(i, 0, static_cast<long>(n) - 1));
            };
            const double v00 = in[cl(iy) * n + cl(ix)], v01 = in[cl(iy) * n + cl(ix + 1)];
            const double v10 = in[cl(iy + 1) * n + cl(ix)], v11 = in[cl(iy + 1) * n + cl(ix + 1)];
            out[y * m + x] = (1 - ay) * ((1 - ax) * v00 + ax * v01) +
                             ay * ((1 - ax) * v10 + ax * v11);
        }
    }
    return out;
}

} // namespace

RegionBox synth_manipulate(ImageTensor& frame, const SynthConfig& cfg, Xoshiro256pp& rng) {
    const std::size_t s = cfg.image_size;
    const std::size_t side = cfg.region_size;
    const std::size_t margin = 2;
    const std::size_t span = s - side - 2 * margin;
    RegionBox box;
    box.side = side;
    box.y0 = margin + rng.below(span + 1);
    box.x0 = margin + rng.below(span + 1);

    const std::size_t up = static_cast<std::size_t>(std::lround(side * cfg.resize_factor));
    for (std::size_t c = 0; c < frame.channels; ++c) {
        std::vector<double> region(side * side);
        for (std::size_t y = 0; y < side; ++y)
            for (std::size_t x = 0; x < side; ++x)
                region[y * side + x] = frame.at(c, box.y0 + y, box.x0 + x);
        // up-sample by the non-integer factor, then back down: smooths fine
        // texture and leaves an off-grid interpolation footprint
        std::vector<double> upsampled = resize_plane(region, side, up);
        std::vector<double> down = resize_plane(upsampled, up, side);
        for (std::size_t y = 0; y < side; ++y)
            for (std::size_t x = 0; x < side; ++x) {
                const double d = static_cast<double>(
                    std::min(std::min(y, side - 1 - y), std::min(x, side - 1 - x)));
                const double alpha = cfg.feather_radius <= 0.0
                    ? 1.0
                    : std::min(1.0, (d + 1.0) / (cfg.feather_radius + 1.0));
                const double orig = frame.at(c, box.y0 + y, box.x0 + x);
                frame.at(c, box.y0 + y, box.x0 + x) = static_cast<float>(
                    std::clamp(alpha * down[y * side + x] + (1.0 - alpha) * orig, 0.0, 1.0));
            }
    }
    return box;
}

std::vector<SampleRecord> generate_synthetic(const SynthConfig& cfg, const std::string& out_dir) {
    validate_synth(cfg);
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "frames", ec);
    if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());

    // alternate real/fake so both classes drift together; split at video level
    const std::size_t per_class = cfg.n_videos / 2;
    const std::size_t train_per_class = std::max<std::size_t>(
        1, std::min(per_class - 1,
                    static_cast<std::size_t>(std::lround(cfg.train_fraction * per_class))));

    std::vector<SampleRecord> records;
    char name[64];
    for (std::size_t v = 0; v < cfg.n_videos; ++v) {
        const int label = static_cast<int>(v % 2);
        const std::size_t class_index = v / 2;
        const bool in_train = class_index < train_per_class;
        const std::uint64_t video_seed = derive_seed(cfg.seed, 0x51E0, v);

        std::snprintf(name, sizeof(name), "v%04zu", v);
        const std::string video_id = cfg.dataset_name + "_" + name;
        for (std::size_t f = 0; f < cfg.frames_per_video; ++f) {
            ImageTensor frame = synth_real_frame(cfg, video_seed, f);
            if (label == 1) {
                Xoshiro256pp manip_rng(derive_seed(video_seed, 0xB0, f));
                synth_manipulate(frame, cfg, manip_rng);
            }
            std::snprintf(name, sizeof(name), "%s_v%04zu_f%03zu.ppm", cfg.dataset_name.c_str(),
                          v, f);
            const std::string rel = std::string("frames/") + name;
            write_image((fs::path(out_dir) / rel).string(), frame);
            records.push_back({video_id, static_cast<long>(f), rel, label, cfg.dataset_name,
                               in_train ? "train" : "test"});
        }
    }
    save_manifest((fs::path(out_dir) / "manifest.jsonl").string(), records);
    return records;
}

std::uint64_t manifest_digest(const std::string& manifest_path, bool include_frames) {
    auto fnv1a = [](std::uint64_t h, const std::string& bytes) {
        for (unsigned char ch : bytes) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        return h;
    };
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw IoError("manifest_digest: cannot open '" + p + "'");
        return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    };

    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, slurp(manifest_path));
    if (include_frames) {
        const fs::path base = fs::path(manifest_path).parent_path();
        for (const auto& r : load_manifest(manifest_path)) {
            fs::path p(r.path);
            if (p.is_relative()) p = base / p;
            h = fnv1a(h, slurp(p.string()));
        }
    }
    return h;
}

} // namespace fusecue

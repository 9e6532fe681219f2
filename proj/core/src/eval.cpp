#include "fusecue/eval.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "fusecue/errors.hpp"

namespace fusecue {

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw InvalidShape("auc: scores/labels size mismatch");
    const std::size_t n = scores.size();
    std::int64_t n_pos = 0;
    for (int l : labels) {
        if (l != 0 && l != 1) throw InvalidSpec("auc: labels must be 0 or 1");
        n_pos += l;
    }
    const std::int64_t n_neg = static_cast<std::int64_t>(n) - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw UndefinedMetric("auc: needs at least one positive and one negative");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // 2 * (rank sum of positives) stays integral under midranks: a tie group
    // occupying 1-based positions [i+1, j] has midrank (i+j+1)/2.
    std::int64_t twice_rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const std::int64_t twice_midrank = static_cast<std::int64_t>(i) + static_cast<std::int64_t>(j) + 1;
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] == 1) twice_rank_sum_pos += twice_midrank;
        i = j;
    }
    const std::int64_t numerator2 = twice_rank_sum_pos - n_pos * (n_pos + 1);
    return static_cast<double>(numerator2) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::vector<VideoScore> frame_to_video_score(const std::vector<FrameScore>& frames) {
    std::vector<VideoScore> out;
    std::map<std::string, std::size_t> index;
    std::vector<std::size_t> counts;
    for (const auto& f : frames) {
        auto it = index.find(f.video_id);
        if (it == index.end()) {
            index.emplace(f.video_id, out.size());
            out.push_back({f.video_id, f.score, f.label});
            counts.push_back(1);
        } else {
            VideoScore& v = out[it->second];
            if (v.label != f.label)
                throw InvalidSpec("frame_to_video_score: inconsistent labels for video '" +
                                  f.video_id + "'");
            v.score += f.score;
            counts[it->second] += 1;
        }
    }
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k].score /= static_cast<double>(counts[k]);
    return out;
}

double average_auc(const std::map<std::string, double>& per_dataset) {
    if (per_dataset.empty()) throw UndefinedMetric("average_auc: no datasets");
    double s = 0.0;
    for (const auto& [name, v] : per_dataset) s += v;
    return s / static_cast<double>(per_dataset.size());
}

double delta_vs_baseline(double avg, double baseline_avg) {
    return (avg - baseline_avg) * 100.0;
}

void finalize_report(EvalReport& r) {
    std::map<std::string, double> frame_aucs, video_aucs;
    for (const auto& [name, d] : r.datasets) {
        frame_aucs[name] = d.auc_frame;
        video_aucs[name] = d.auc_video;
    }
    r.avg_auc = average_auc(frame_aucs);
    r.avg_auc_video = average_auc(video_aucs);
    if (r.has_baseline) r.delta_points = delta_vs_baseline(r.avg_auc, r.baseline_avg);
}

std::string report_to_json(const EvalReport& r) {
    nlohmann::json j;
    j["version"] = 1;
    for (const auto& [name, d] : r.datasets) {
        j["datasets"][name] = {{"auc_frame", d.auc_frame},
                               {"auc_video", d.auc_video},
                               {"n_frames", d.n_frames},
                               {"n_videos", d.n_videos}};
    }
    j["avg_auc"] = r.avg_auc;
    j["avg_auc_video"] = r.avg_auc_video;
    if (r.has_baseline) {
        j["baseline"] = {{"name", r.baseline_name},
                         {"avg_auc", r.baseline_avg},
                         {"delta_points", r.delta_points}};
    }
    return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("eval report: invalid JSON: ") + e.what());
    }
    EvalReport r;
    try {
        if (j.contains("datasets"))
            for (auto& [name, d] : j["datasets"].items())
                r.datasets[name] = {d.at("auc_frame").get<double>(), d.at("auc_video").get<double>(),
                                    d.at("n_frames").get<std::size_t>(),
                                    d.at("n_videos").get<std::size_t>()};
        r.avg_auc = j.at("avg_auc").get<double>();
        r.avg_auc_video = j.value("avg_auc_video", r.avg_auc);
        if (j.contains("baseline")) {
            r.has_baseline = true;
            r.baseline_name = j["baseline"].at("name").get<std::string>();
            r.baseline_avg = j["baseline"].at("avg_auc").get<double>();
            r.delta_points = j["baseline"].value("delta_points", 0.0);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("eval report: ") + e.what());
    }
    return r;
}

std::string report_to_table(const EvalReport& r) {
    std::size_t name_w = 7;
    for (const auto& [name, d] : r.datasets) name_w = std::max(name_w, name.size());
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    os << std::string(name_w, ' ') << "  frame-AUC  video-AUC  frames  videos\n";
    for (const auto& [name, d] : r.datasets) {
        os << name << std::string(name_w - name.size(), ' ') << "  " << d.auc_frame << "     "
           << d.auc_video << "     " << d.n_frames << "  " << d.n_videos << "\n";
    }
    os << "Avg AUC" << std::string(name_w - 7, ' ') << "  " << r.avg_auc << "     "
       << r.avg_auc_video << "\n";
    if (r.has_baseline) {
        os.precision(2);
        os << "Delta vs " << r.baseline_name << ": " << (r.delta_points >= 0 ? "+" : "")
           << r.delta_points << " AUC points\n";
    }
    return os.str();
}

} // namespace fusecue

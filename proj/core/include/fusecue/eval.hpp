#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace fusecue {

/// ROC-AUC via the rank-sum (Mann-Whitney) estimator with midrank tie
/// handling: P(score_fake > score_real) + 0.5 * P(tie). The numerator is
/// accumulated in exact integer arithmetic, so the result is bit-identical
/// to the O(n^2) pairwise definition. Throws UndefinedMetric when either
/// class is absent.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct FrameScore {
    std::string video_id;
    double score = 0.0;
    int label = 0;
};

struct VideoScore {
    std::string video_id;
    double score = 0.0; // mean of frame scores
    int label = 0;
};

/// Mean frame score per video, videos ordered by first appearance. Frames of
/// one video must agree on the label (video-level labeling).
std::vector<VideoScore> frame_to_video_score(const std::vector<FrameScore>& frames);

/// Unweighted arithmetic mean over datasets.
double average_auc(const std::map<std::string, double>& per_dataset);

/// (avg - baseline_avg) * 100: absolute AUC percentage points, the quantity
/// in the tables' delta rows (not a relative percent change).
double delta_vs_baseline(double avg, double baseline_avg);

struct DatasetEval {
    double auc_frame = 0.0;
    double auc_video = 0.0;
    std::size_t n_frames = 0;
    std::size_t n_videos = 0;
};

/// Cross-dataset evaluation summary. Frame-level AUC is the primary number;
/// video-level is reported alongside.
struct EvalReport {
    std::map<std::string, DatasetEval> datasets;
    double avg_auc = 0.0;       // mean of frame-level AUCs
    double avg_auc_video = 0.0; // mean of video-level AUCs
    bool has_baseline = false;
    std::string baseline_name;
    double baseline_avg = 0.0;
    double delta_points = 0.0;
};

/// Fills avg fields (and delta when a baseline is set) from the dataset map.
void finalize_report(EvalReport& r);

std::string report_to_json(const EvalReport& r);
EvalReport report_from_json(const std::string& text);

/// Aligned human-readable table.
std::string report_to_table(const EvalReport& r);

} // namespace fusecue

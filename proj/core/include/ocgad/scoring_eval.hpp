#pragma once

// IQR thresholding, binary labelling and the ranking/classification metrics
// used to evaluate detections.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ocgad {

// Ground-truth class of an event. kNormal means not injected.
enum class AnomalyType { kNormal, kAttrSwap, kTimestampShift, kRandomActivity };

inline constexpr AnomalyType kInjectedTypes[] = {
    AnomalyType::kAttrSwap, AnomalyType::kTimestampShift,
    AnomalyType::kRandomActivity};

const char* to_string(AnomalyType type);
// Throws Error(kMalformedDocument) for an unknown name.
AnomalyType anomaly_type_from_string(std::string_view name);

// Linear interpolation between order statistics at position (n − 1)·q.
// Throws Error(kEmptyInput) for no values, Error(kInvalidArgument) for q
// outside [0, 1].
double quantile(std::vector<double> values, double q);

struct ThresholdResult {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double tau = 0.0;
  double k_factor = 1.5;

  bool operator==(const ThresholdResult&) const = default;
};

// τ = Q3 + k·(Q3 − Q1).
ThresholdResult iqr_threshold(const std::vector<double>& scores,
                              double k_factor = 1.5);

// anomalous ⟺ score > τ.
std::vector<bool> label_events(const std::vector<double>& scores,
                               const ThresholdResult& threshold);

// F1 of the positive class; 0 when precision + recall = 0.
double f1_score(const std::vector<bool>& predicted,
                const std::vector<bool>& truth);

// Mann-Whitney U / (n_pos · n_neg) with midranks for ties.
double auc_roc(const std::vector<double>& scores, const std::vector<bool>& truth);

// Step-wise average precision; equal scores are ranked by event index.
double auc_pr(const std::vector<double>& scores, const std::vector<bool>& truth);

// Share of positives among the k highest scores (ties by event index).
double recall_at_k(const std::vector<double>& scores,
                   const std::vector<bool>& truth, std::size_t k);

// Event indices by descending score, ascending index on ties.
std::vector<std::size_t> rank_by_score(const std::vector<double>& scores);

struct MetricSet {
  std::optional<double> f1;
  std::optional<double> auc_roc;
  std::optional<double> auc_pr;
  std::optional<double> recall_at_k;

  bool operator==(const MetricSet&) const = default;
};

struct MetricsBlock {
  std::size_t k = 0;  // number of ground-truth anomalies
  MetricSet overall;
  // Per injected type: f1/auc_roc/auc_pr over the normal events plus that
  // type's events; recall_at_k over all events with k unchanged.
  std::map<AnomalyType, MetricSet> per_type;

  bool operator==(const MetricsBlock&) const = default;
};

// A metric that is undefined for the given truth (e.g. a single class) is
// left empty rather than raised.
MetricsBlock evaluate_detection(const std::vector<double>& scores,
                                const std::vector<bool>& predicted,
                                const std::vector<AnomalyType>& truth);

struct EventVerdict {
  std::string event_id;
  double score = 0.0;
  bool anomalous = false;
  std::optional<AnomalyType> truth;

  bool operator==(const EventVerdict&) const = default;
};

struct DetectionReport {
  std::vector<std::pair<std::string, std::string>> run_info;
  ThresholdResult threshold;
  std::vector<EventVerdict> events;
  std::optional<MetricsBlock> metrics;

  bool operator==(const DetectionReport&) const = default;

  std::vector<double> scores() const;
  std::vector<bool> labels() const;
};

// Thresholds `scores` and labels each event.
DetectionReport make_report(const std::vector<std::string>& event_ids,
                            const std::vector<double>& scores,
                            double k_factor = 1.5);

// Joins truth by event id and fills `metrics`. Throws Error(kJoinMismatch)
// when the id sets differ.
void attach_truth(DetectionReport& report,
                  const std::map<std::string, AnomalyType>& truth);

std::string report_to_json(const DetectionReport& report);
DetectionReport report_from_json(std::string_view text);
// event_id,score,label[,truth]
void write_report_csv(std::ostream& out, const DetectionReport& report);

void print_metrics_table(std::ostream& out, const MetricsBlock& metrics);

// Column-wise mean ± sample standard deviation over several runs.
void print_metrics_summary(std::ostream& out,
                           const std::vector<MetricsBlock>& runs);

}  // namespace ocgad

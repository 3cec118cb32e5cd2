#include "ocgad/scoring_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ocgad/error.hpp"

namespace ocgad {
namespace {

void require_lengths(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw Error(Errc::kLengthMismatch, std::string(op) + ": " +
                                           std::to_string(a) + " vs " +
                                           std::to_string(b));
  }
}

std::size_t count_true(const std::vector<bool>& v) {
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), true));
}

}  // namespace

const char* to_string(AnomalyType type) {
  switch (type) {
    case AnomalyType::kNormal: return "normal";
    case AnomalyType::kAttrSwap: return "attr_swap";
    case AnomalyType::kTimestampShift: return "timestamp_shift";
    case AnomalyType::kRandomActivity: return "random_activity";
  }
  return "unknown";
}

AnomalyType anomaly_type_from_string(std::string_view name) {
  if (name == "normal") return AnomalyType::kNormal;
  if (name == "attr_swap") return AnomalyType::kAttrSwap;
  if (name == "timestamp_shift") return AnomalyType::kTimestampShift;
  if (name == "random_activity") return AnomalyType::kRandomActivity;
  throw Error(Errc::kMalformedDocument,
              "unknown anomaly label '" + std::string(name) + "'");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(Errc::kEmptyInput, "quantile of no values");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "quantile level outside [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values[lo];
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

ThresholdResult iqr_threshold(const std::vector<double>& scores,
                              double k_factor) {
  if (scores.empty()) throw Error(Errc::kEmptyInput, "no scores to threshold");
  ThresholdResult t;
  t.k_factor = k_factor;
  t.q1 = quantile(scores, 0.25);
  t.q3 = quantile(scores, 0.75);
  t.iqr = t.q3 - t.q1;
  t.tau = t.q3 + k_factor * t.iqr;
  return t;
}

std::vector<bool> label_events(const std::vector<double>& scores,
                               const ThresholdResult& threshold) {
  std::vector<bool> labels(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    labels[i] = scores[i] > threshold.tau;
  }
  return labels;
}

double f1_score(const std::vector<bool>& predicted,
                const std::vector<bool>& truth) {
  require_lengths(predicted.size(), truth.size(), "f1_score");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] && truth[i]) ++tp;
    if (predicted[i] && !truth[i]) ++fp;
    if (!predicted[i] && truth[i]) ++fn;
  }
  const double precision = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
  const double recall = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double auc_roc(const std::vector<double>& scores,
               const std::vector<bool>& truth) {
  require_lengths(scores.size(), truth.size(), "auc_roc");
  const std::size_t n_pos = count_true(truth);
  const std::size_t n_neg = truth.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(Errc::kSingleClass, "AUC-ROC needs both classes");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  // Sum of 1-based midranks over positives.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (truth[order[t]]) rank_sum += midrank;
    }
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

std::vector<std::size_t> rank_by_score(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

double auc_pr(const std::vector<double>& scores,
              const std::vector<bool>& truth) {
  require_lengths(scores.size(), truth.size(), "auc_pr");
  const std::size_t n_pos = count_true(truth);
  if (n_pos == 0) throw Error(Errc::kNoPositives, "AUC-PR needs a positive");
  double ap = 0.0;
  std::size_t hits = 0;
  const auto order = rank_by_score(scores);
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (!truth[order[r]]) continue;
    ++hits;
    ap += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
  return ap / static_cast<double>(n_pos);
}

double recall_at_k(const std::vector<double>& scores,
                   const std::vector<bool>& truth, std::size_t k) {
  require_lengths(scores.size(), truth.size(), "recall_at_k");
  if (k == 0) throw Error(Errc::kInvalidArgument, "recall_at_k needs k >= 1");
  const std::size_t n_pos = count_true(truth);
  if (n_pos == 0) throw Error(Errc::kNoPositives, "recall@k needs a positive");
  const auto order = rank_by_score(scores);
  const std::size_t top = std::min(k, order.size());
  std::size_t hits = 0;
  for (std::size_t r = 0; r < top; ++r) hits += truth[order[r]] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(n_pos);
}

MetricsBlock evaluate_detection(const std::vector<double>& scores,
                                const std::vector<bool>& predicted,
                                const std::vector<AnomalyType>& truth) {
  require_lengths(scores.size(), truth.size(), "evaluate_detection");
  require_lengths(predicted.size(), truth.size(), "evaluate_detection");

  auto fill = [](MetricSet& out, const std::vector<double>& s,
                 const std::vector<bool>& p, const std::vector<bool>& t,
                 std::size_t k) {
    const std::size_t pos = count_true(t);
    out.f1 = f1_score(p, t);
    if (pos > 0 && pos < t.size()) out.auc_roc = auc_roc(s, t);
    if (pos > 0) out.auc_pr = auc_pr(s, t);
    if (pos > 0 && k > 0) out.recall_at_k = recall_at_k(s, t, k);
  };

  MetricsBlock block;
  std::vector<bool> is_anomaly(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    is_anomaly[i] = truth[i] != AnomalyType::kNormal;
  }
  block.k = count_true(is_anomaly);
  fill(block.overall, scores, predicted, is_anomaly, block.k);

  for (AnomalyType type : kInjectedTypes) {
    std::vector<double> sub_scores;
    std::vector<bool> sub_pred, sub_truth, full_truth(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
      full_truth[i] = truth[i] == type;
      if (truth[i] == type || truth[i] == AnomalyType::kNormal) {
        sub_scores.push_back(scores[i]);
        sub_pred.push_back(predicted[i]);
        sub_truth.push_back(truth[i] == type);
      }
    }
    if (count_true(full_truth) == 0) continue;
    MetricSet m;
    fill(m, sub_scores, sub_pred, sub_truth, 0);
    m.recall_at_k = recall_at_k(scores, full_truth, block.k);
    block.per_type[type] = m;
  }
  return block;
}

}  // namespace ocgad

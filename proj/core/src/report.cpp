#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include <json.hpp>

#include "ocgad/error.hpp"
#include "ocgad/scoring_eval.hpp"

namespace ocgad {
namespace {

using Json = nlohmann::ordered_json;

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

Json metric_set_to_json(const MetricSet& m) {
  Json j;
  j["f1"] = optional_number(m.f1);
  j["auc_roc"] = optional_number(m.auc_roc);
  j["auc_pr"] = optional_number(m.auc_pr);
  j["recall_at_k"] = optional_number(m.recall_at_k);
  return j;
}

MetricSet metric_set_from_json(const nlohmann::json& j) {
  MetricSet m;
  m.f1 = read_optional(j, "f1");
  m.auc_roc = read_optional(j, "auc_roc");
  m.auc_pr = read_optional(j, "auc_pr");
  m.recall_at_k = read_optional(j, "recall_at_k");
  return m;
}

std::string percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * *v);
  return buf;
}

std::string mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return "n/a";
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sd =
      xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.1f ± %.1f", 100.0 * mean, 100.0 * sd);
  return buf;
}

void pad(std::ostream& out, const std::string& s, std::size_t width) {
  out << s;
  // Count code points so '±' does not skew the columns.
  std::size_t len = 0;
  for (unsigned char c : s) len += (c & 0xC0) != 0x80;
  for (std::size_t i = len; i < width; ++i) out << ' ';
}

}  // namespace

std::vector<double> DetectionReport::scores() const {
  std::vector<double> out;
  out.reserve(events.size());
  for (const EventVerdict& e : events) out.push_back(e.score);
  return out;
}

std::vector<bool> DetectionReport::labels() const {
  std::vector<bool> out;
  out.reserve(events.size());
  for (const EventVerdict& e : events) out.push_back(e.anomalous);
  return out;
}

DetectionReport make_report(const std::vector<std::string>& event_ids,
                            const std::vector<double>& scores,
                            double k_factor) {
  if (event_ids.size() != scores.size()) {
    throw Error(Errc::kLengthMismatch, "event ids vs scores");
  }
  DetectionReport report;
  report.threshold = iqr_threshold(scores, k_factor);
  const auto labels = label_events(scores, report.threshold);
  report.events.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    report.events.push_back({event_ids[i], scores[i], labels[i], std::nullopt});
  }
  return report;
}

void attach_truth(DetectionReport& report,
                  const std::map<std::string, AnomalyType>& truth) {
  if (truth.size() != report.events.size()) {
    throw Error(Errc::kJoinMismatch,
                "truth has " + std::to_string(truth.size()) +
                    " events, report has " +
                    std::to_string(report.events.size()));
  }
  std::vector<AnomalyType> joined;
  joined.reserve(report.events.size());
  for (EventVerdict& e : report.events) {
    auto it = truth.find(e.event_id);
    if (it == truth.end()) {
      throw Error(Errc::kJoinMismatch,
                  "event '" + e.event_id + "' has no ground truth");
    }
    e.truth = it->second;
    joined.push_back(it->second);
  }
  report.metrics =
      evaluate_detection(report.scores(), report.labels(), joined);
}

std::string report_to_json(const DetectionReport& report) {
  Json doc;
  Json run = Json::object();
  for (const auto& [key, value] : report.run_info) run[key] = value;
  doc["run"] = std::move(run);
  doc["threshold"] = {{"q1", report.threshold.q1},
                      {"q3", report.threshold.q3},
                      {"iqr", report.threshold.iqr},
                      {"tau", report.threshold.tau},
                      {"k_factor", report.threshold.k_factor}};
  std::size_t anomalous = 0;
  for (const EventVerdict& e : report.events) anomalous += e.anomalous ? 1 : 0;
  doc["summary"] = {{"events", report.events.size()}, {"anomalous", anomalous}};
  if (report.metrics) {
    Json m;
    m["k"] = report.metrics->k;
    m["overall"] = metric_set_to_json(report.metrics->overall);
    Json per_type = Json::object();
    for (const auto& [type, set] : report.metrics->per_type) {
      per_type[to_string(type)] = metric_set_to_json(set);
    }
    m["per_type"] = std::move(per_type);
    doc["metrics"] = std::move(m);
  }
  Json events = Json::array();
  for (const EventVerdict& e : report.events) {
    Json item;
    item["id"] = e.event_id;
    item["score"] = e.score;
    item["label"] = e.anomalous ? "anomalous" : "normal";
    if (e.truth) item["truth"] = to_string(*e.truth);
    events.push_back(std::move(item));
  }
  doc["events"] = std::move(events);
  return doc.dump(1) + "\n";
}

DetectionReport report_from_json(std::string_view text) {
  DetectionReport report;
  try {
    const auto doc = Json::parse(text.begin(), text.end());
    for (const auto& [key, value] : doc.at("run").items()) {
      report.run_info.emplace_back(key, value.get<std::string>());
    }
    const auto& t = doc.at("threshold");
    report.threshold = {t.at("q1").get<double>(), t.at("q3").get<double>(),
                        t.at("iqr").get<double>(), t.at("tau").get<double>(),
                        t.at("k_factor").get<double>()};
    if (auto it = doc.find("metrics"); it != doc.end()) {
      MetricsBlock m;
      m.k = it->at("k").get<std::size_t>();
      m.overall = metric_set_from_json(it->at("overall"));
      for (const auto& [name, set] : it->at("per_type").items()) {
        m.per_type[anomaly_type_from_string(name)] = metric_set_from_json(set);
      }
      report.metrics = std::move(m);
    }
    for (const auto& item : doc.at("events")) {
      EventVerdict e;
      e.event_id = item.at("id").get<std::string>();
      e.score = item.at("score").get<double>();
      const auto label = item.at("label").get<std::string>();
      if (label != "anomalous" && label != "normal") {
        throw Error(Errc::kMalformedDocument, "bad label " + label);
      }
      e.anomalous = label == "anomalous";
      if (auto tr = item.find("truth"); tr != item.end()) {
        e.truth = anomaly_type_from_string(tr->get<std::string>());
      }
      report.events.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformedDocument, std::string("report: ") + e.what());
  }
  return report;
}

void write_report_csv(std::ostream& out, const DetectionReport& report) {
  bool with_truth = false;
  for (const EventVerdict& e : report.events) with_truth |= e.truth.has_value();
  out << "event_id,score,label" << (with_truth ? ",truth" : "") << '\n';
  for (const EventVerdict& e : report.events) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", e.score);
    out << e.event_id << ',' << buf << ','
        << (e.anomalous ? "anomalous" : "normal");
    if (with_truth) out << ',' << (e.truth ? to_string(*e.truth) : "");
    out << '\n';
  }
}

void print_metrics_table(std::ostream& out, const MetricsBlock& metrics) {
  out << "k = " << metrics.k << " ground-truth anomalies\n";
  pad(out, "subset", 18);
  pad(out, "F1", 10);
  pad(out, "AUC ROC", 10);
  pad(out, "AUC PR", 10);
  out << "Recall@k\n";
  auto row = [&](const std::string& name, const MetricSet& m) {
    pad(out, name, 18);
    pad(out, percent(m.f1), 10);
    pad(out, percent(m.auc_roc), 10);
    pad(out, percent(m.auc_pr), 10);
    out << percent(m.recall_at_k) << '\n';
  };
  row("overall", metrics.overall);
  for (const auto& [type, m] : metrics.per_type) row(to_string(type), m);
}

void print_metrics_summary(std::ostream& out,
                           const std::vector<MetricsBlock>& runs) {
  out << runs.size() << " runs, mean ± std (percent)\n";
  pad(out, "subset", 18);
  pad(out, "F1", 14);
  pad(out, "AUC ROC", 14);
  pad(out, "AUC PR", 14);
  out << "Recall@k\n";
  auto collect = [&](auto getter) {
    std::vector<double> xs;
    for (const MetricsBlock& b : runs) {
      if (auto v = getter(b)) xs.push_back(*v);
    }
    return mean_std(xs);
  };
  auto row = [&](const std::string& name, auto pick) {
    pad(out, name, 18);
    pad(out, collect([&](const MetricsBlock& b) { return pick(b).f1; }), 14);
    pad(out, collect([&](const MetricsBlock& b) { return pick(b).auc_roc; }), 14);
    pad(out, collect([&](const MetricsBlock& b) { return pick(b).auc_pr; }), 14);
    out << collect([&](const MetricsBlock& b) { return pick(b).recall_at_k; })
        << '\n';
  };
  row("overall", [](const MetricsBlock& b) { return b.overall; });
  std::set<AnomalyType> types;
  for (const MetricsBlock& b : runs) {
    for (const auto& [type, m] : b.per_type) types.insert(type);
  }
  for (AnomalyType type : types) {
    row(to_string(type), [type](const MetricsBlock& b) {
      auto it = b.per_type.find(type);
      return it == b.per_type.end() ? MetricSet{} : it->second;
    });
  }
}

}  // namespace ocgad

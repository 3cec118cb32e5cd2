// Acceptance runner: one PASS/FAIL line per criterion, exit 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "gradcheck.hpp"
#include "ocgad/anomaly_injector.hpp"
#include "ocgad/gcnae.hpp"
#include "ocgad/graph_encoding.hpp"
#include "ocgad/instance_graph.hpp"
#include "ocgad/loggen.hpp"
#include "ocgad/ocel.hpp"
#include "ocgad/scoring_eval.hpp"
#include "oracles.hpp"

using namespace ocgad;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kLinearAlgebraTol = 1e-12;
constexpr double kGradTol = 1e-4;
constexpr std::size_t kGradInstances = 20;
constexpr std::size_t kOracleTrials = 100;
constexpr long kSmallFinalEvents = 23137;
constexpr long kSmallInjected = 2310;
constexpr long kSmallSlack = 5;
constexpr double kLargeFinalEvents = 407499;
constexpr double kLargeInjected = 40704;
constexpr double kLargeRelTol = 0.002;
constexpr double kLossRatio = 0.1;
constexpr double kRecallFloor = 0.70;
constexpr double kRecallGap = 0.30;
constexpr std::uint64_t kDetectionSeeds = 5;
constexpr double kRate = 0.10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

bool g_all_pass = true;

void report(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  g_all_pass &= pass;
  std::printf("[%s] %d %s: %s (%.2f s of %.0f s)%s\n", pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs, budget_s, in_time ? "" : " over budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

ObjectCentricLog worked_example() {
  return read_ocel_file(fs::path(OCGAD_TEST_DATA_DIR) / "worked_example.jsonocel");
}

Outcome golden_reconstruction() {
  const auto log = worked_example();
  const auto set = build_instances(log);
  std::set<std::set<std::string>> got;
  for (const auto& inst : set.instances) {
    std::set<std::string> ids;
    for (std::size_t v : inst.node_indices) ids.insert(log.events[v].id);
    got.insert(ids);
  }
  const std::set<std::set<std::string>> want{{"e1", "e4", "e7", "e8"}, {"e2", "e3", "e5", "e6"}};
  const int kAdjacency[8][8] = {
      {0, 0, 0, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 1, 0, 0, 0}, {0, 0, 0, 0, 0, 1, 0, 0},
      {0, 0, 0, 0, 0, 0, 1, 1}, {0, 0, 0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0}};
  const auto a = build_adjacency(set, log.events.size());
  std::size_t wrong = a.n() == 8 ? 0 : 64;
  for (std::size_t r = 0; r < 8 && a.n() == 8; ++r) {
    for (std::size_t c = 0; c < 8; ++c) wrong += a.contains(r, c) != (kAdjacency[r][c] == 1);
  }
  return {got == want && wrong == 0,
          std::to_string(set.instances.size()) + " instances, " + std::to_string(wrong) +
              " adjacency entries differ"};
}

Outcome golden_encoding() {
  const auto g = encode_graph(worked_example(), false);
  const double kFeatures[8][7] = {
      {1, 0, 0, 0, 0, 0.12, 0.75}, {1, 0, 0, 0, 0, 0.33, 0.98}, {0, 1, 0, 0, 0, 0.24, 0.39},
      {0, 0, 1, 0, 0, 0.15, 0.67}, {0, 0, 1, 0, 0, 0.89, 0.21}, {0, 0, 0, 1, 0, 0.58, 0.46},
      {0, 0, 0, 0, 1, 0.73, 0.81}, {0, 0, 0, 1, 0, 0.42, 0.34}};
  if (g.features.rows() != 8 || g.features.cols() != 7) return {false, "shape mismatch"};
  std::size_t wrong = 0;
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 7; ++c) wrong += g.features(r, c) != kFeatures[r][c];
  }
  return {wrong == 0, std::to_string(wrong) + " of 56 entries differ"};
}

Outcome gradient_check() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < kGradInstances; ++seed) {
    const auto r = gradcheck::run_instance(seed);
    worst = std::max(worst, r.worst_relative_error);
    checked += r.checked;
  }
  return {worst < kGradTol, std::to_string(checked) + " weights, worst relative error " +
                                fmt("%.2e", worst)};
}

DenseMatrix random_dense(std::mt19937_64& gen, std::size_t r, std::size_t c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix m(r, c);
  for (double& v : m.data()) v = u(gen);
  return m;
}

Outcome oracle_equivalence() {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double la = 0.0;
  std::size_t rank_mismatches = 0;
  for (std::size_t t = 0; t < kOracleTrials; ++t) {
    const std::size_t n = 1 + gen() % 12, k = 1 + gen() % 7, m = 1 + gen() % 7;
    const auto a = random_dense(gen, n, k), b = random_dense(gen, k, m);
    la = std::max(la, oracle::max_abs_diff(
                          oracle::multiply(oracle::to_dense(a), oracle::to_dense(b)), matmul(a, b)));

    std::vector<Edge> edges;
    for (std::size_t e = 0; e < 2 * n; ++e) {
      const std::size_t u = gen() % n, v = gen() % n;
      if (u != v) edges.push_back({u, v});
    }
    const auto norm = normalize_adjacency(SparseAdjacency::from_edges(n, edges));
    const auto d = random_dense(gen, n, m);
    la = std::max(la, oracle::max_abs_diff(oracle::multiply(oracle::to_dense(norm.view()),
                                                            oracle::to_dense(d)),
                                           spmm(norm.view(), d)));

    const auto x = random_dense(gen, n, k), xhat = random_dense(gen, n, k);
    la = std::max(la, std::abs(reconstruction_loss(x, xhat) -
                               oracle::row_mse(oracle::to_dense(x), oracle::to_dense(xhat))));

    std::vector<double> scores(n + 2);
    for (double& s : scores) s = unit(gen);
    for (double q : {0.25, 0.5, 0.75}) {
      la = std::max(la, std::abs(quantile(scores, q) - oracle::quantile(scores, q)));
    }

    // Tie-free scores with both classes.
    std::vector<bool> truth(scores.size());
    for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = gen() % 3 == 0;
    truth[0] = true;
    truth[1] = false;
    rank_mismatches += auc_roc(scores, truth) != oracle::auc_roc(scores, truth);
    rank_mismatches += auc_pr(scores, truth) != oracle::average_precision(scores, truth);
    for (std::size_t kk = 1; kk <= scores.size(); ++kk) {
      rank_mismatches += recall_at_k(scores, truth, kk) != oracle::recall_at_k(scores, truth, kk);
    }
  }
  return {la <= kLinearAlgebraTol && rank_mismatches == 0,
          std::to_string(kOracleTrials) + " trials, max abs diff " + fmt("%.1e", la) + ", " +
              std::to_string(rank_mismatches) + " rank-metric mismatches"};
}

Outcome contamination_arithmetic() {
  const auto small = plan_injection(22367, kRate, 0);
  const long small_final = 22367 + static_cast<long>(small.counts.random_activity);
  const long small_inj = static_cast<long>(small.counts.total());
  const auto large = plan_injection(393931, kRate, 0);
  const double large_final = 393931.0 + static_cast<double>(large.counts.random_activity);
  const double large_inj = static_cast<double>(large.counts.total());
  const double rel_final = std::abs(large_final - kLargeFinalEvents) / kLargeFinalEvents;
  const double rel_inj = std::abs(large_inj - kLargeInjected) / kLargeInjected;
  const bool pass = std::labs(small_final - kSmallFinalEvents) <= kSmallSlack &&
                    std::labs(small_inj - kSmallInjected) <= kSmallSlack &&
                    rel_final <= kLargeRelTol && rel_inj <= kLargeRelTol;
  return {pass, "22367 events: " + std::to_string(small_final) + "/" + std::to_string(small_inj) + ", 393931 events: " +
                    fmt("%.0f", large_final) + "/" + fmt("%.0f", large_inj) + " (" +
                    fmt("%.3f%%", 100 * std::max(rel_final, rel_inj)) + ")"};
}

Outcome training_convergence() {
  GenConfig gen;
  const auto log = generate(gen);
  const auto g = encode_graph(log);
  const auto r = train(g, TrainConfig{});
  const double first = r.loss_per_epoch.front(), last = r.loss_per_epoch.back();
  return {last < kLossRatio * first,
          std::to_string(log.events.size()) + " events, loss " + fmt("%.5f", first) + " -> " +
              fmt("%.5f", last) + " (ratio " + fmt("%.3f", last / first) + ")"};
}

Outcome detection_pattern() {
  double swap = 0.0, shift = 0.0, random = 0.0;
  std::size_t events = 0;
  for (std::uint64_t seed = 0; seed < kDetectionSeeds; ++seed) {
    GenConfig gen;
    gen.seed = seed;
    const auto clean = generate(gen);
    const auto [log, truth] = inject_all(clean, plan_injection(clean.events.size(), kRate, seed));
    cli::RunConfig cfg;
    cfg.seed = seed;
    auto rep = cli::detect(log, cfg, "generated");
    attach_truth(rep, truth.as_map());
    const auto& per = rep.metrics->per_type;
    swap += *per.at(AnomalyType::kAttrSwap).recall_at_k;
    shift += *per.at(AnomalyType::kTimestampShift).recall_at_k;
    random += *per.at(AnomalyType::kRandomActivity).recall_at_k;
    events += log.events.size();
  }
  const double n = static_cast<double>(kDetectionSeeds);
  swap /= n;
  shift /= n;
  random /= n;
  const bool pass = swap >= kRecallFloor && random >= kRecallFloor &&
                    swap - shift >= kRecallGap && random - shift >= kRecallGap;
  return {pass, "mean recall@k over " + std::to_string(kDetectionSeeds) + " seeds (~" +
                    std::to_string(events / kDetectionSeeds) + " events): attr_swap " +
                    fmt("%.3f", swap) + ", random_activity " + fmt("%.3f", random) +
                    ", timestamp_shift " + fmt("%.3f", shift)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome reproducibility() {
  const auto root = fs::temp_directory_path() / "ocgad_acceptance_repro";
  fs::remove_all(root);
  std::string reports[2];
  for (int run = 0; run < 2; ++run) {
    cli::RunConfig cfg;
    cfg.output = root / ("run" + std::to_string(run));
    std::ostringstream sink;
    if (cli::cmd_pipeline(cfg, sink) != 0) return {false, "pipeline failed"};
    reports[run] = slurp(cfg.output / "report_seed0.json");
  }
  fs::remove_all(root);
  const bool same = !reports[0].empty() && reports[0] == reports[1];
  return {same, std::to_string(reports[0].size()) + " bytes, " +
                    (same ? "identical" : "different")};
}

Outcome iqr_suite() {
  const auto t = iqr_threshold({1, 2, 3, 4, 100});
  const auto labels = label_events({1, 2, 3, 4, 100}, t);
  const auto flagged = std::count(labels.begin(), labels.end(), true);
  const std::vector<double> flat(10, 0.3);
  const auto flat_labels = label_events(flat, iqr_threshold(flat));
  const auto flat_flagged = std::count(flat_labels.begin(), flat_labels.end(), true);
  return {t.tau == 7.0 && flagged == 1 && labels[4] && flat_flagged == 0,
          "tau " + fmt("%g", t.tau) + ", " + std::to_string(flagged) + " anomaly; constant: " +
              std::to_string(flat_flagged)};
}

}  // namespace

int main() {
  report(1, "golden reconstruction", 1, golden_reconstruction);
  report(2, "golden encoding", 1, golden_encoding);
  report(3, "gradient check", 30, gradient_check);
  report(4, "oracle equivalence", 60, oracle_equivalence);
  report(5, "contamination arithmetic", 1, contamination_arithmetic);
  report(6, "training convergence", 180, training_convergence);
  report(7, "detection pattern", 900, detection_pattern);
  report(8, "reproducibility", 600, reproducibility);
  report(9, "iqr threshold", 1, iqr_suite);
  return g_all_pass ? 0 : 1;
}

#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "ocgad/anomaly_injector.hpp"
#include "support.hpp"

using namespace ocgad;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ocgad");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Small enough to train in well under a second.
const std::vector<std::string> kGen = {"--orders", "40"};
const std::vector<std::string> kSmall = {"--epochs", "15", "--hidden1", "8", "--hidden2", "4"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"generate"}).code == 2);
  CHECK(run_cli({"generate", "-o", "x.jsonocel", "--orders", "many"}).code == 2);
  CHECK(run_cli({"generate", "-o", ""}).code == 2);
  CHECK(run_cli({"generate", "-o", "x.jsonocel", "--orders", "0"}).code == 2);
  CHECK(run_cli({"generate", "-o", "x.jsonocel", "--base-time", "yesterday"}).code == 2);
  CHECK(run_cli({"detect", "-i", "/nonexistent/log.jsonocel", "-o", "r.json"}).code == 2);
}

TEST_CASE("generate is byte-reproducible") {
  const auto dir = testing::scratch_dir("cli_generate");
  const auto a = dir / "a.jsonocel", b = dir / "b.jsonocel", c = dir / "c.jsonocel";
  REQUIRE(run_cli({"generate", "-o", a.string(), "--orders", "30", "--seed", "4"}).code == 0);
  REQUIRE(run_cli({"generate", "-o", b.string(), "--orders", "30", "--seed", "4"}).code == 0);
  REQUIRE(run_cli({"generate", "-o", c.string(), "--orders", "30", "--seed", "5"}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) != slurp(c));
  const auto log = read_ocel_file(a);
  CHECK(validate_log(log).empty());

  const auto one = dir / "one.jsonocel";
  REQUIRE(run_cli({"generate", "-o", one.string(), "--orders", "1", "--items-max", "1",
                   "--orders-per-package-max", "1"})
              .code == 0);
  CHECK(read_ocel_file(one).events.size() == 4);
}

TEST_CASE("inject writes the log and truth") {
  const auto dir = testing::scratch_dir("cli_inject");
  const auto log = dir / "log.jsonocel", dirty = dir / "dirty.jsonocel";
  REQUIRE(run_cli({"generate", "-o", log.string(), "--orders", "60"}).code == 0);
  const auto r = run_cli({"inject", "-i", log.string(), "-o", dirty.string(), "--seed", "2"});
  REQUIRE(r.code == 0);
  const auto original = read_ocel_file(log);
  const auto contaminated = read_ocel_file(dirty);
  const auto truth = read_truth_file(dir / "dirty.truth.csv");
  const auto plan = plan_injection(original.events.size(), 0.10, 2);
  CHECK(contaminated.events.size() == original.events.size() + plan.counts.random_activity);
  CHECK(truth.labels.size() == contaminated.events.size());
  CHECK(truth.count(AnomalyType::kAttrSwap) == plan.counts.attr_swap);

  const auto clean = dir / "clean.jsonocel";
  REQUIRE(run_cli({"inject", "-i", log.string(), "-o", clean.string(), "--rate", "0",
                   "--truth", (dir / "t0.csv").string()})
              .code == 0);
  CHECK(read_ocel_file(clean) == original);
  CHECK(read_truth_file(dir / "t0.csv").count(AnomalyType::kNormal) == original.events.size());

  CHECK(run_cli({"inject", "-i", log.string(), "-o", clean.string(), "--rate", "1.5"}).code == 2);
}

TEST_CASE("infeasible injection exits 3") {
  const auto dir = testing::scratch_dir("cli_infeasible");
  ObjectCentricLog log;
  log.object_types = {"A"};
  log.schema = {{"size", AttributeKind::kNumeric}};
  for (int i = 0; i < 40; ++i) {
    Event ev;
    ev.id = "e" + std::to_string(i);
    ev.activity = "a";
    ev.timestamp = Timestamp{i * 60'000};
    ev.object_refs = {"x"};
    ev.attributes.emplace("size", AttributeValue::numeric(1.0));
    log.events.push_back(ev);
  }
  log.objects = {{"x", "A"}};
  refresh_activities(log);
  write_ocel_file(log, dir / "flat.jsonocel");
  CHECK(run_cli({"inject", "-i", (dir / "flat.jsonocel").string(), "-o",
                 (dir / "out.jsonocel").string()})
            .code == 3);
}

TEST_CASE("detect, truth join and evaluate") {
  const auto dir = testing::scratch_dir("cli_detect");
  const auto log = dir / "log.jsonocel", dirty = dir / "dirty.jsonocel";
  REQUIRE(run_cli(with({"generate", "-o", log.string()}, kGen)).code == 0);
  REQUIRE(run_cli({"inject", "-i", log.string(), "-o", dirty.string()}).code == 0);
  const auto truth = (dir / "dirty.truth.csv").string();

  const auto a = dir / "a.json", b = dir / "b.json";
  REQUIRE(run_cli(with({"detect", "-i", dirty.string(), "-o", a.string(), "--truth", truth},
                       kSmall))
              .code == 0);
  REQUIRE(run_cli(with({"detect", "-i", dirty.string(), "-o", b.string(), "--truth", truth},
                       kSmall))
              .code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(fs::exists(dir / "a.csv"));
  const auto report = report_from_json(slurp(a));
  REQUIRE(report.metrics.has_value());
  CHECK(report.metrics->per_type.size() == 3);
  const auto doc = nlohmann::json::parse(slurp(a));
  CHECK(doc["run"]["input"] == "dirty.jsonocel");
  CHECK(doc["run"]["epochs"] == "15");

  // Truth for the clean log does not cover the injected events.
  REQUIRE(run_cli({"inject", "-i", log.string(), "-o", (dir / "same.jsonocel").string(),
                   "--rate", "0", "--truth", (dir / "clean.csv").string()})
              .code == 0);
  CHECK(run_cli(with({"detect", "-i", dirty.string(), "-o", (dir / "c.json").string(),
                      "--truth", (dir / "clean.csv").string()},
                     kSmall))
            .code == 5);
  CHECK(run_cli({"evaluate", "--truth", (dir / "clean.csv").string(), "--report", a.string()})
            .code == 5);

  const auto ev = run_cli({"evaluate", "--truth", truth, "--report", a.string(), "--report",
                           b.string()});
  CHECK(ev.code == 0);
  CHECK(ev.out.find("2 runs") != std::string::npos);
  const auto rep = run_cli(with({"evaluate", "--truth", truth, "-i", dirty.string(),
                                 "--repeat", "2"},
                                kSmall));
  CHECK(rep.code == 0);
  CHECK(rep.out.find("2 runs") != std::string::npos);
}

TEST_CASE("saved model scores identically") {
  const auto dir = testing::scratch_dir("cli_model");
  const auto log = dir / "log.jsonocel";
  REQUIRE(run_cli(with({"generate", "-o", log.string()}, kGen)).code == 0);
  const auto model = dir / "model.json";
  REQUIRE(run_cli(with({"detect", "-i", log.string(), "-o", (dir / "a.json").string(),
                        "--save-model", model.string()},
                       kSmall))
              .code == 0);
  REQUIRE(run_cli({"detect", "-i", log.string(), "-o", (dir / "b.json").string(),
                   "--load-model", model.string()})
              .code == 0);
  CHECK(report_from_json(slurp(dir / "a.json")).scores() ==
        report_from_json(slurp(dir / "b.json")).scores());
  CHECK(run_cli({"detect", "-i", log.string(), "-o", (dir / "c.json").string(),
                 "--load-model", (dir / "missing.json").string()})
            .code == 2);
}

TEST_CASE("pipeline manifest echoes the effective config") {
  const auto dir = testing::scratch_dir("cli_pipeline");
  const auto cfg = dir / "run.ini";
  {
    std::ofstream out(cfg);
    out << "[pipeline]\nseed = 7\nepochs = 12\nrate = 0.2\n";
  }
  const auto out_dir = dir / "out";
  const auto r = run_cli({"--config", cfg.string(), "pipeline", "-o", out_dir.string(),
                          "--orders", "40", "--hidden1", "8", "--hidden2", "4",
                          "--epochs", "10", "--repeat", "2"});
  REQUIRE(r.code == 0);
  const auto manifest = nlohmann::json::parse(slurp(out_dir / "manifest.json"));
  CHECK(manifest["config"]["seed"] == 7);
  CHECK(manifest["config"]["rate"] == 0.2);
  CHECK(manifest["config"]["train"]["epochs"] == 10);
  CHECK(manifest["config"]["generate"]["orders"] == 40);
  CHECK(manifest["stages"].size() == 5);
  CHECK(fs::exists(out_dir / "report_seed7.json"));
  CHECK(fs::exists(out_dir / "report_seed8.json"));
  CHECK(fs::exists(out_dir / "truth.csv"));
}

TEST_CASE("instances command") {
  const auto dir = testing::scratch_dir("cli_instances");
  const auto r = run_cli({"instances", "-i", testing::data_path("worked_example.jsonocel").string(),
                          "--dot", (dir / "g.dot").string(), "--edges",
                          (dir / "g.tsv").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("instances 2") != std::string::npos);
  CHECK(slurp(dir / "g.dot").find("label=\"P2\"") != std::string::npos);
  CHECK(slurp(dir / "g.tsv").find("e1\te4\n") != std::string::npos);
}

#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ocgad/error.hpp"
#include "ocgad/graph_encoding.hpp"
#include "ocgad/instance_graph.hpp"

namespace ocgad::cli {
namespace {

namespace fs = std::filesystem;

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_path(const fs::path& p, const char* what) {
  if (p.empty()) throw Error(Errc::kInvalidArgument, std::string(what) + " path is empty");
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::ofstream open_out(const fs::path& p) {
  ensure_parent(p);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write " + p.string());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path with_suffix(fs::path p, const std::string& suffix) {
  p.replace_extension(suffix);
  return p;
}

fs::path truth_path_for(const RunConfig& cfg) {
  return cfg.truth.empty() ? with_suffix(cfg.output, ".truth.csv") : cfg.truth;
}

fs::path layout_path_for(const fs::path& model) {
  fs::path p = model;
  p += ".layout.json";
  return p;
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["rate"] = cfg.rate;
  j["swap_subsample"] = cfg.swap_subsample;
  j["repeat"] = cfg.repeat;
  j["scale_numeric"] = cfg.scale_numeric;
  j["k_factor"] = cfg.k_factor;
  j["train"] = {{"hidden1", cfg.train.hidden1},
                {"hidden2", cfg.train.hidden2},
                {"learning_rate", cfg.train.learning_rate},
                {"epochs", cfg.train.epochs},
                {"beta1", cfg.train.beta1},
                {"beta2", cfg.train.beta2},
                {"epsilon", cfg.train.epsilon}};
  j["generate"] = {{"orders", cfg.gen.n_orders},
                   {"items_min", cfg.gen.items_per_order.min},
                   {"items_max", cfg.gen.items_per_order.max},
                   {"orders_per_package_min", cfg.gen.orders_per_package.min},
                   {"orders_per_package_max", cfg.gen.orders_per_package.max},
                   {"mean_step_minutes", cfg.gen.mean_step_minutes},
                   {"base_time", cfg.gen.base_time.to_iso8601()}};
  return j;
}

std::map<std::string, AnomalyType> load_truth(const fs::path& path) {
  return read_truth_file(path).as_map();
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->code()) {
      case Errc::kInsufficientCandidates: return kInjectionInfeasible;
      case Errc::kNonFiniteLoss: return kNumericFailure;
      case Errc::kJoinMismatch: return kJoinFailure;
      default: return kConfigError;
    }
  }
  return kConfigError;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.output, "output");
  GenConfig gen = cfg.gen;
  gen.seed = cfg.seed;
  const ObjectCentricLog log = generate(gen);
  ensure_parent(cfg.output);
  write_ocel_file(log, cfg.output);
  out << "generated " << log.events.size() << " events, " << log.objects.size()
      << " objects -> " << cfg.output.string() << '\n';
  return kOk;
}

int cmd_inject(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.input, "input");
  require_path(cfg.output, "output");
  const ObjectCentricLog log = read_ocel_file(cfg.input);
  InjectionPlan plan = plan_injection(log.events.size(), cfg.rate, cfg.seed);
  plan.swap_subsample = cfg.swap_subsample;
  auto [contaminated, truth] = inject_all(log, plan);
  ensure_parent(cfg.output);
  write_ocel_file(contaminated, cfg.output);
  const fs::path truth_path = truth_path_for(cfg);
  auto truth_out = open_out(truth_path);
  write_truth_csv(truth_out, truth);
  out << "injected " << plan.counts.total() << " anomalies ("
      << plan.counts.attr_swap << " attr_swap, " << plan.counts.timestamp_shift
      << " timestamp_shift, " << plan.counts.random_activity
      << " random_activity); " << contaminated.events.size()
      << " events -> " << cfg.output.string() << ", truth -> "
      << truth_path.string() << '\n';
  return kOk;
}

DetectionReport detect(const ObjectCentricLog& log, const RunConfig& cfg,
                       const std::string& input_name) {
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;

  EncodedGraph graph;
  GcnaeModel model;
  std::optional<double> first_loss, final_loss;
  if (!cfg.load_model.empty()) {
    FeatureLayout layout =
        FeatureLayout::from_json(slurp(layout_path_for(cfg.load_model)));
    graph = encode_graph(log, std::move(layout), cfg.scale_numeric);
    model = load_model(cfg.load_model, graph.layout);
  } else {
    graph = encode_graph(log, cfg.scale_numeric);
    TrainReport trained = ocgad::train(graph, tc);
    model = std::move(trained.model);
    first_loss = trained.loss_per_epoch.front();
    final_loss = trained.loss_per_epoch.back();
  }
  if (!cfg.save_model.empty()) {
    ensure_parent(cfg.save_model);
    save_model(cfg.save_model, model, graph.layout);
    auto layout_out = open_out(layout_path_for(cfg.save_model));
    layout_out << graph.layout.to_json();
  }

  const ForwardCache fwd = forward(graph, model);
  const auto scores = score_events(graph.features, fwd.xhat, graph.layout);
  DetectionReport report = make_report(graph.event_ids, scores, cfg.k_factor);
  report.run_info = {
      {"input", input_name},
      {"seed", std::to_string(cfg.seed)},
      {"epochs", std::to_string(tc.epochs)},
      {"hidden1", std::to_string(tc.hidden1)},
      {"hidden2", std::to_string(tc.hidden2)},
      {"learning_rate", number(tc.learning_rate)},
      {"k_factor", number(cfg.k_factor)},
      {"scale_numeric", cfg.scale_numeric ? "true" : "false"},
      {"feature_width", std::to_string(graph.layout.width())},
      {"model", cfg.load_model.empty() ? "trained" : "loaded"},
  };
  if (first_loss) report.run_info.emplace_back("first_loss", number(*first_loss));
  if (final_loss) report.run_info.emplace_back("final_loss", number(*final_loss));
  return report;
}

int cmd_detect(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.input, "input");
  require_path(cfg.output, "output");
  const ObjectCentricLog log = read_ocel_file(cfg.input);
  DetectionReport report = detect(log, cfg, cfg.input.filename().string());
  if (!cfg.truth.empty()) attach_truth(report, load_truth(cfg.truth));

  auto json_out = open_out(cfg.output);
  json_out << report_to_json(report);
  const fs::path csv_path = with_suffix(cfg.output, ".csv");
  auto csv_out = open_out(csv_path);
  write_report_csv(csv_out, report);

  std::size_t anomalous = 0;
  for (const auto& e : report.events) anomalous += e.anomalous ? 1 : 0;
  out << "scored " << report.events.size() << " events, tau = "
      << number(report.threshold.tau) << ", " << anomalous
      << " labelled anomalous -> " << cfg.output.string() << ", "
      << csv_path.string() << '\n';
  if (report.metrics) print_metrics_table(out, *report.metrics);
  return kOk;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.truth, "truth");
  const auto truth = load_truth(cfg.truth);
  std::vector<MetricsBlock> runs;

  if (!cfg.reports.empty()) {
    for (const fs::path& path : cfg.reports) {
      DetectionReport report = report_from_json(slurp(path));
      attach_truth(report, truth);
      out << "== " << path.string() << '\n';
      print_metrics_table(out, *report.metrics);
      runs.push_back(*report.metrics);
    }
  } else {
    require_path(cfg.input, "input (or --report)");
    const ObjectCentricLog log = read_ocel_file(cfg.input);
    for (std::size_t r = 0; r < cfg.repeat; ++r) {
      RunConfig run = cfg;
      run.seed = cfg.seed + r;
      DetectionReport report = detect(log, run, cfg.input.filename().string());
      attach_truth(report, truth);
      out << "== seed " << run.seed << '\n';
      print_metrics_table(out, *report.metrics);
      runs.push_back(*report.metrics);
    }
  }
  if (runs.size() > 1) print_metrics_summary(out, runs);
  return kOk;
}

int cmd_pipeline(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.output, "output directory");
  fs::create_directories(cfg.output);
  const fs::path log_path = cfg.output / "log.jsonocel";
  const fs::path contaminated_path = cfg.output / "contaminated.jsonocel";
  const fs::path truth_path = cfg.output / "truth.csv";

  nlohmann::ordered_json manifest;
  manifest["command"] = "pipeline";
  manifest["config"] = config_json(cfg);
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();

  RunConfig gen = cfg;
  gen.output = log_path;
  cmd_generate(gen, out);
  stages.push_back({{"stage", "generate"}, {"seed", cfg.seed},
                    {"output", log_path.filename().string()}});

  RunConfig inj = cfg;
  inj.input = log_path;
  inj.output = contaminated_path;
  inj.truth = truth_path;
  cmd_inject(inj, out);
  stages.push_back({{"stage", "inject"}, {"seed", cfg.seed},
                    {"output", contaminated_path.filename().string()},
                    {"truth", truth_path.filename().string()}});

  std::vector<MetricsBlock> runs;
  for (std::size_t r = 0; r < cfg.repeat; ++r) {
    RunConfig det = cfg;
    det.seed = cfg.seed + r;
    det.input = contaminated_path;
    det.truth = truth_path;
    det.output = cfg.output / ("report_seed" + std::to_string(det.seed) + ".json");
    cmd_detect(det, out);
    DetectionReport report = report_from_json(slurp(det.output));
    runs.push_back(*report.metrics);
    stages.push_back({{"stage", "detect"}, {"seed", det.seed},
                      {"output", det.output.filename().string()}});
  }
  if (runs.size() > 1) print_metrics_summary(out, runs);
  stages.push_back({{"stage", "evaluate"}, {"runs", runs.size()}});
  manifest["stages"] = std::move(stages);

  auto manifest_out = open_out(cfg.output / "manifest.json");
  manifest_out << manifest.dump(1) << '\n';
  return kOk;
}

int cmd_instances(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.input, "input");
  const ObjectCentricLog log = read_ocel_file(cfg.input);
  const ProcessInstanceSet set = build_instances(log);
  const InstanceStats stats = instance_stats(set);
  out << "events " << log.events.size() << ", instances " << stats.count;
  if (stats.count > 0) {
    out << ", events per instance (max " << *stats.max_events << ", min "
        << *stats.min_events << ", avg " << number(*stats.mean_events) << ")";
  }
  out << '\n';
  if (!cfg.dot.empty()) {
    auto dot = open_out(cfg.dot);
    write_dot(dot, log, set);
  }
  if (!cfg.edges.empty()) {
    auto edges = open_out(cfg.edges);
    write_edge_list(edges, log, set);
  }
  return kOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anomalous event detection in object-centric event logs"};
  app.set_config("--config", "", "INI/TOML file; [section] per subcommand");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string base_time = cfg.gen.base_time.to_iso8601();
  bool no_scale = false;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  };
  auto add_train = [&](CLI::App* sub) {
    sub->add_option("--epochs", cfg.train.epochs, "Training epochs")
        ->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--hidden1", cfg.train.hidden1, "First encoder width")
        ->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--hidden2", cfg.train.hidden2, "Latent width")
        ->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--lr", cfg.train.learning_rate, "Adam learning rate")
        ->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--k-factor", cfg.k_factor, "IQR multiplier")
        ->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_flag("--no-scale-numeric", no_scale,
                  "Keep numeric attributes unscaled");
  };
  auto add_gen = [&](CLI::App* sub) {
    sub->add_option("--orders", cfg.gen.n_orders, "Number of orders")
        ->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--items-min", cfg.gen.items_per_order.min)->capture_default_str();
    sub->add_option("--items-max", cfg.gen.items_per_order.max)->capture_default_str();
    sub->add_option("--orders-per-package-min", cfg.gen.orders_per_package.min)
        ->capture_default_str();
    sub->add_option("--orders-per-package-max", cfg.gen.orders_per_package.max)
        ->capture_default_str();
    sub->add_option("--mean-step-minutes", cfg.gen.mean_step_minutes)
        ->capture_default_str();
    sub->add_option("--base-time", base_time, "ISO-8601 start time")
        ->capture_default_str();
  };
  auto add_inject = [&](CLI::App* sub) {
    sub->add_option("--rate", cfg.rate, "Contamination rate")->capture_default_str();
    sub->add_option("--swap-subsample", cfg.swap_subsample,
                    "Candidates scanned per attribute swap (0 = all)")
        ->capture_default_str();
  };

  auto* gen = app.add_subcommand("generate", "Write a synthetic OCEL JSON log");
  gen->add_option("-o,--output", cfg.output, "Output .jsonocel")->required();
  add_seed(gen);
  add_gen(gen);

  auto* inj = app.add_subcommand("inject", "Inject benchmark anomalies");
  inj->add_option("-i,--input", cfg.input, "Clean .jsonocel")->required();
  inj->add_option("-o,--output", cfg.output, "Contaminated .jsonocel")->required();
  inj->add_option("--truth", cfg.truth, "Truth CSV (default: <output>.truth.csv)");
  add_seed(inj);
  add_inject(inj);

  auto* det = app.add_subcommand("detect", "Train the autoencoder and label events");
  det->add_option("-i,--input", cfg.input, "Input .jsonocel")->required();
  det->add_option("-o,--output", cfg.output, "Report JSON (CSV written beside it)")
      ->required();
  det->add_option("--truth", cfg.truth, "Optional truth CSV to attach metrics");
  det->add_option("--save-model", cfg.save_model, "Write trained weights");
  det->add_option("--load-model", cfg.load_model, "Score with stored weights");
  add_seed(det);
  add_train(det);

  auto* ev = app.add_subcommand("evaluate", "Metrics against ground truth");
  ev->add_option("--truth", cfg.truth, "Truth CSV")->required();
  ev->add_option("--report", cfg.reports, "Report JSON (repeatable)");
  ev->add_option("-i,--input", cfg.input, "Log to detect on when no --report");
  ev->add_option("--repeat", cfg.repeat, "Seeded runs (seed, seed+1, ...)")
      ->capture_default_str()->check(CLI::PositiveNumber);
  add_seed(ev);
  add_train(ev);

  auto* pipe = app.add_subcommand("pipeline", "generate -> inject -> detect -> evaluate");
  pipe->add_option("-o,--output", cfg.output, "Output directory")->required();
  pipe->add_option("--repeat", cfg.repeat, "Seeded detection runs")
      ->capture_default_str()->check(CLI::PositiveNumber);
  add_seed(pipe);
  add_gen(pipe);
  add_inject(pipe);
  add_train(pipe);

  auto* inst = app.add_subcommand("instances", "Reconstruct process instances");
  inst->add_option("-i,--input", cfg.input, "Input .jsonocel")->required();
  inst->add_option("--dot", cfg.dot, "Write Graphviz DOT");
  inst->add_option("--edges", cfg.edges, "Write tab-separated edge list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    cfg.scale_numeric = !no_scale;
    cfg.gen.base_time = Timestamp::parse_iso8601(base_time);
    if (*gen) return cmd_generate(cfg, out);
    if (*inj) return cmd_inject(cfg, out);
    if (*det) return cmd_detect(cfg, out);
    if (*ev) return cmd_evaluate(cfg, out);
    if (*pipe) return cmd_pipeline(cfg, out);
    if (*inst) return cmd_instances(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kConfigError;
}

}  // namespace ocgad::cli

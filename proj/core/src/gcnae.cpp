#include "ocgad/gcnae.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ocgad/error.hpp"

namespace ocgad {
namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::kDimensionMismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

nlohmann::ordered_json matrix_to_json(const DenseMatrix& m) {
  nlohmann::ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::vector<double>(m.data().begin(), m.data().end());
  return j;
}

DenseMatrix matrix_from_json(const nlohmann::json& j) {
  DenseMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.size()) {
    throw Error(Errc::kMalformedDocument, "weight matrix data length");
  }
  std::copy(data.begin(), data.end(), m.data().begin());
  if (!m.all_finite()) {
    throw Error(Errc::kMalformedDocument, "weight matrix has non-finite values");
  }
  return m;
}

}  // namespace

GcnaeModel GcnaeModel::initialize(std::size_t input_width, std::size_t hidden1,
                                  std::size_t hidden2, Rng& rng) {
  GcnaeModel m;
  m.w0 = glorot_init(input_width, hidden1, rng);
  m.w1 = glorot_init(hidden1, hidden2, rng);
  m.w2 = glorot_init(hidden2, input_width, rng);
  return m;
}

void GcnaeModel::check_shapes() const {
  if (w0.cols() != w1.rows() || w1.cols() != w2.rows() ||
      w2.cols() != w0.rows()) {
    throw Error(Errc::kDimensionMismatch, "weights do not chain k->h1->h2->k");
  }
}

void TrainConfig::validate() const {
  if (hidden1 < 1 || hidden2 < 1) {
    throw Error(Errc::kInvalidArgument, "hidden widths must be >= 1");
  }
  if (epochs < 1) throw Error(Errc::kInvalidArgument, "epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(Errc::kInvalidArgument, "learning rate must be positive");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) ||
      !(epsilon > 0.0)) {
    throw Error(Errc::kInvalidArgument, "invalid Adam hyperparameters");
  }
}

ForwardCache forward(const NormalizedAdjacency& a, const DenseMatrix& x,
                     const GcnaeModel& m) {
  m.check_shapes();
  if (x.cols() != m.input_width()) {
    throw Error(Errc::kDimensionMismatch,
                "feature width " + std::to_string(x.cols()) +
                    " does not match model width " +
                    std::to_string(m.input_width()));
  }
  const CsrView at = a.view();
  ForwardCache c;
  c.ax = spmm(at, x);
  c.p0 = matmul(c.ax, m.w0);
  c.h1 = relu(c.p0);
  c.ah1 = spmm(at, c.h1);
  c.p1 = matmul(c.ah1, m.w1);
  c.z = relu(c.p1);
  c.az = spmm(at, c.z);
  c.p2 = matmul(c.az, m.w2);
  c.xhat = relu(c.p2);
  return c;
}

ForwardCache forward(const EncodedGraph& g, const GcnaeModel& m) {
  return forward(g.normalized, g.features, m);
}

double reconstruction_loss(const DenseMatrix& x, const DenseMatrix& xhat) {
  require_same_shape(x, xhat, "reconstruction_loss");
  if (x.rows() == 0 || x.cols() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t u = 0; u < x.rows(); ++u) {
    auto xr = x.row(u);
    auto yr = xhat.row(u);
    double row = 0.0;
    for (std::size_t j = 0; j < xr.size(); ++j) {
      const double d = xr[j] - yr[j];
      row += d * d;
    }
    total += row / static_cast<double>(x.cols());
  }
  return total / static_cast<double>(x.rows());
}

Gradients backward(const NormalizedAdjacency& a, const DenseMatrix& x,
                   const GcnaeModel& m, const ForwardCache& c) {
  require_same_shape(x, c.xhat, "backward");
  const CsrView at = a.view();
  const double scale =
      x.size() == 0 ? 0.0 : 2.0 / static_cast<double>(x.rows() * x.cols());

  DenseMatrix d_xhat = c.xhat;
  {
    auto d = d_xhat.data();
    auto xs = x.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = scale * (d[i] - xs[i]);
  }

  Gradients g;
  const DenseMatrix d_p2 = relu_backward(d_xhat, c.p2);
  g.w2 = matmul_tn(c.az, d_p2);
  // Ãᵀ = Ã, so the adjoint of left-multiplication by Ã is Ã itself.
  const DenseMatrix d_z = spmm(at, matmul_nt(d_p2, m.w2));
  const DenseMatrix d_p1 = relu_backward(d_z, c.p1);
  g.w1 = matmul_tn(c.ah1, d_p1);
  const DenseMatrix d_h1 = spmm(at, matmul_nt(d_p1, m.w1));
  const DenseMatrix d_p0 = relu_backward(d_h1, c.p0);
  g.w0 = matmul_tn(c.ax, d_p0);
  return g;
}

Gradients backward(const EncodedGraph& g, const GcnaeModel& m,
                   const ForwardCache& cache) {
  return backward(g.normalized, g.features, m, cache);
}

TrainReport train(const EncodedGraph& g, const TrainConfig& cfg) {
  cfg.validate();
  if (g.features.cols() == 0) {
    throw Error(Errc::kInvalidArgument, "feature matrix has no columns");
  }
  Rng rng(cfg.seed);
  TrainReport report;
  report.model = GcnaeModel::initialize(g.features.cols(), cfg.hidden1,
                                        cfg.hidden2, rng);
  GcnaeModel& m = report.model;
  const AdamConfig adam{cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon};
  AdamState s0 = AdamState::for_shape(m.w0.rows(), m.w0.cols(), adam);
  AdamState s1 = AdamState::for_shape(m.w1.rows(), m.w1.cols(), adam);
  AdamState s2 = AdamState::for_shape(m.w2.rows(), m.w2.cols(), adam);

  report.loss_per_epoch.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const ForwardCache cache = forward(g, m);
    const double loss = reconstruction_loss(g.features, cache.xhat);
    if (!std::isfinite(loss)) {
      throw Error(Errc::kNonFiniteLoss,
                  "loss became non-finite at epoch " + std::to_string(epoch + 1));
    }
    report.loss_per_epoch.push_back(loss);
    const Gradients grads = backward(g, m, cache);
    adam_step(m.w0, grads.w0, s0);
    adam_step(m.w1, grads.w1, s1);
    adam_step(m.w2, grads.w2, s2);
  }
  return report;
}

std::vector<double> score_events(const DenseMatrix& x, const DenseMatrix& xhat,
                                 const FeatureLayout& layout) {
  require_same_shape(x, xhat, "score_events");
  if (layout.width() != x.cols()) {
    throw Error(Errc::kDimensionMismatch, "layout width differs from features");
  }
  std::vector<double> scores(x.rows(), 0.0);
  if (layout.groups.empty()) return scores;
  for (std::size_t u = 0; u < x.rows(); ++u) {
    auto xr = x.row(u);
    auto yr = xhat.row(u);
    double sum_of_group_means = 0.0;
    std::size_t groups = 0;
    for (const FeatureGroup& g : layout.groups) {
      if (g.width() == 0) continue;
      double sq = 0.0;
      for (std::size_t j = g.begin; j < g.end; ++j) {
        const double d = xr[j] - yr[j];
        sq += d * d;
      }
      sum_of_group_means += sq / static_cast<double>(g.width());
      ++groups;
    }
    scores[u] = groups == 0 ? 0.0 : sum_of_group_means / static_cast<double>(groups);
  }
  return scores;
}

std::string model_to_json(const GcnaeModel& m, std::uint64_t layout_checksum) {
  m.check_shapes();
  nlohmann::ordered_json doc;
  doc["format"] = "ocgad-gcnae";
  doc["version"] = 1;
  doc["input_width"] = m.w0.rows();
  doc["hidden1"] = m.w0.cols();
  doc["hidden2"] = m.w1.cols();
  doc["layout_checksum"] = hex64(layout_checksum);
  doc["w0"] = matrix_to_json(m.w0);
  doc["w1"] = matrix_to_json(m.w1);
  doc["w2"] = matrix_to_json(m.w2);
  return doc.dump() + "\n";
}

GcnaeModel model_from_json(std::string_view text,
                           std::uint64_t expected_layout_checksum) {
  GcnaeModel m;
  try {
    const auto doc = nlohmann::json::parse(text.begin(), text.end());
    if (doc.at("format").get<std::string>() != "ocgad-gcnae") {
      throw Error(Errc::kMalformedDocument, "not a model file");
    }
    const auto stored = doc.at("layout_checksum").get<std::string>();
    if (stored != hex64(expected_layout_checksum)) {
      throw Error(Errc::kChecksumMismatch,
                  "model layout " + stored + " vs target layout " +
                      hex64(expected_layout_checksum));
    }
    m.w0 = matrix_from_json(doc.at("w0"));
    m.w1 = matrix_from_json(doc.at("w1"));
    m.w2 = matrix_from_json(doc.at("w2"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformedDocument, std::string("model: ") + e.what());
  }
  m.check_shapes();
  return m;
}

void save_model(const std::filesystem::path& path, const GcnaeModel& m,
                const FeatureLayout& layout) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out << model_to_json(m, layout.checksum());
}

GcnaeModel load_model(const std::filesystem::path& path,
                      const FeatureLayout& layout) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str(), layout.checksum());
}

}  // namespace ocgad

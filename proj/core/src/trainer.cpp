#include "mafl/trainer.hpp"

#include <Eigen/Core>
#include <cmath>

#include "mafl/errors.hpp"
#include "mafl/rng.hpp"

// Parameter layouts (flat, in order):
//   softmax: W [C x F] row-major, b [C]
//   mlp:     W1 [H x F] row-major, b1 [H], W2 [C x H] row-major, b2 [C]

namespace mafl {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMajorMap = Eigen::Map<
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using RowMajorMutMap = Eigen::Map<
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

constexpr double kProbFloor = 1e-12;

MatrixXd gather(const DatasetView& view) {
  const auto n = static_cast<Eigen::Index>(view.size());
  const auto f = static_cast<Eigen::Index>(view.base->feature_dim);
  MatrixXd x(n, f);
  for (Eigen::Index i = 0; i < n; ++i) {
    const float* row = view.row(i);
    for (Eigen::Index j = 0; j < f; ++j) x(i, j) = row[j];
  }
  return x;
}

// rowwise softmax in place of the logits matrix
void softmax_rows(MatrixXd& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    double m = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - m).exp();
    z.row(i) /= z.row(i).sum();
  }
}

struct SoftmaxViews {
  RowMajorMap w;
  Eigen::Map<const VectorXd> b;
};

SoftmaxViews softmax_views(const TrainerModel& m) {
  const double* p = m.params.values.data();
  return {RowMajorMap(p, m.n_classes, m.feature_dim),
          Eigen::Map<const VectorXd>(p + std::size_t(m.n_classes) * m.feature_dim,
                                     m.n_classes)};
}

struct MlpViews {
  RowMajorMap w1;
  Eigen::Map<const VectorXd> b1;
  RowMajorMap w2;
  Eigen::Map<const VectorXd> b2;
};

MlpViews mlp_views(const TrainerModel& m) {
  const double* p = m.params.values.data();
  std::size_t o = 0;
  RowMajorMap w1(p + o, m.hidden_width, m.feature_dim);
  o += std::size_t(m.hidden_width) * m.feature_dim;
  Eigen::Map<const VectorXd> b1(p + o, m.hidden_width);
  o += m.hidden_width;
  RowMajorMap w2(p + o, m.n_classes, m.hidden_width);
  o += std::size_t(m.n_classes) * m.hidden_width;
  Eigen::Map<const VectorXd> b2(p + o, m.n_classes);
  return {w1, b1, w2, b2};
}

// forward pass to probabilities; for the MLP also returns activations
MatrixXd forward(const TrainerModel& m, const MatrixXd& x,
                 MatrixXd* activations_out = nullptr) {
  MatrixXd z;
  if (m.kind == ModelKind::softmax_regression) {
    auto v = softmax_views(m);
    z.noalias() = x * v.w.transpose();
    z.rowwise() += v.b.transpose();
  } else {
    auto v = mlp_views(m);
    MatrixXd a;
    a.noalias() = x * v.w1.transpose();
    a.rowwise() += v.b1.transpose();
    a = a.array().tanh();
    z.noalias() = a * v.w2.transpose();
    z.rowwise() += v.b2.transpose();
    if (activations_out) *activations_out = std::move(a);
  }
  softmax_rows(z);
  return z;
}

// gradient of the mean cross-entropy, written into a flat vector
void gradient_into(const TrainerModel& m, const MatrixXd& x,
                   const std::vector<std::uint8_t>& labels,
                   std::vector<double>& grad) {
  const auto n = x.rows();
  grad.assign(m.params.values.size(), 0.0);

  MatrixXd a;
  MatrixXd g = forward(m, x, &a);  // probabilities
  for (Eigen::Index i = 0; i < n; ++i) g(i, labels[i]) -= 1.0;
  g /= static_cast<double>(n);

  if (m.kind == ModelKind::softmax_regression) {
    RowMajorMutMap dw(grad.data(), m.n_classes, m.feature_dim);
    Eigen::Map<VectorXd> db(
        grad.data() + std::size_t(m.n_classes) * m.feature_dim, m.n_classes);
    dw.noalias() = g.transpose() * x;
    db = g.colwise().sum().transpose();
  } else {
    auto v = mlp_views(m);
    std::size_t o = 0;
    RowMajorMutMap dw1(grad.data() + o, m.hidden_width, m.feature_dim);
    o += std::size_t(m.hidden_width) * m.feature_dim;
    Eigen::Map<VectorXd> db1(grad.data() + o, m.hidden_width);
    o += m.hidden_width;
    RowMajorMutMap dw2(grad.data() + o, m.n_classes, m.hidden_width);
    o += std::size_t(m.n_classes) * m.hidden_width;
    Eigen::Map<VectorXd> db2(grad.data() + o, m.n_classes);

    dw2.noalias() = g.transpose() * a;
    db2 = g.colwise().sum().transpose();
    MatrixXd dh = (g * v.w2).cwiseProduct(
        (1.0 - a.array().square()).matrix());
    dw1.noalias() = dh.transpose() * x;
    db1 = dh.colwise().sum().transpose();
  }
}

TrainerModel step_on_matrix(const TrainerModel& model, const MatrixXd& x,
                            const std::vector<std::uint8_t>& labels,
                            double eta, std::vector<double>& grad_scratch) {
  gradient_into(model, x, labels, grad_scratch);
  TrainerModel out = model;
  for (std::size_t i = 0; i < grad_scratch.size(); ++i) {
    double v = out.params.values[i] - eta * grad_scratch[i];
    if (!std::isfinite(v))
      throw NumericError("sgd_step: non-finite parameter at index " +
                         std::to_string(i));
    out.params.values[i] = v;
  }
  return out;
}

std::vector<std::uint8_t> gather_labels(const DatasetView& view) {
  std::vector<std::uint8_t> labels(view.size());
  for (std::size_t i = 0; i < view.size(); ++i) labels[i] = view.label(i);
  return labels;
}

}  // namespace

std::size_t TrainerModel::param_count() const {
  if (kind == ModelKind::softmax_regression)
    return std::size_t(n_classes) * feature_dim + n_classes;
  return std::size_t(hidden_width) * feature_dim + hidden_width +
         std::size_t(n_classes) * hidden_width + n_classes;
}

std::string TrainerModel::expected_shape_tag() const {
  if (kind == ModelKind::softmax_regression)
    return "softmax:" + std::to_string(feature_dim) + "x" +
           std::to_string(n_classes);
  return "mlp:" + std::to_string(feature_dim) + "x" +
         std::to_string(hidden_width) + "x" + std::to_string(n_classes);
}

TrainerModel init_model(ModelKind kind, int feature_dim, int n_classes,
                        int hidden_width, std::uint64_t seed) {
  TrainerModel m;
  m.kind = kind;
  m.feature_dim = feature_dim;
  m.n_classes = n_classes;
  m.hidden_width = hidden_width;
  m.params.shape_tag = m.expected_shape_tag();
  m.params.values.resize(m.param_count());
  Rng rng(derive_seed(seed, "init-global"));
  for (auto& v : m.params.values) v = rng.uniform(-0.05, 0.05);
  return m;
}

TrainerModel model_from_params(ModelKind kind, int feature_dim, int n_classes,
                               int hidden_width, const ModelParams& params) {
  TrainerModel m;
  m.kind = kind;
  m.feature_dim = feature_dim;
  m.n_classes = n_classes;
  m.hidden_width = hidden_width;
  if (params.shape_tag != m.expected_shape_tag() ||
      params.values.size() != m.param_count())
    throw NumericError("model_from_params: shape tag '" + params.shape_tag +
                       "' does not match architecture " +
                       m.expected_shape_tag());
  m.params = params;
  return m;
}

std::vector<double> predict_probs(const TrainerModel& model,
                                  const DatasetView& data) {
  MatrixXd p = forward(model, gather(data));
  std::vector<double> out(p.rows() * p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      out[i * p.cols() + j] = p(i, j);
  return out;
}

LossValue loss(const TrainerModel& model, const DatasetView& shard) {
  if (shard.size() == 0) throw NumericError("loss: empty shard");
  MatrixXd p = forward(model, gather(shard));
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double q = p(i, shard.label(i));
    total -= std::log(q < kProbFloor ? kProbFloor : q);
  }
  return {total, total / static_cast<double>(shard.size())};
}

TrainerModel sgd_step(const TrainerModel& model, const DatasetView& batch,
                      double eta) {
  if (batch.size() == 0) throw NumericError("sgd_step: empty batch");
  std::vector<double> grad;
  return step_on_matrix(model, gather(batch), gather_labels(batch), eta, grad);
}

std::vector<double> gradient(const TrainerModel& model,
                             const DatasetView& batch) {
  std::vector<double> grad;
  gradient_into(model, gather(batch), gather_labels(batch), grad);
  return grad;
}

ModelParams local_train(const ModelParams& global, const DatasetView& shard,
                        const SimConfig& cfg) {
  if (shard.size() == 0) throw NumericError("local_train: empty shard");
  TrainerModel m = model_from_params(cfg.model_kind, shard.base->feature_dim,
                                     shard.base->num_classes, cfg.hidden_width,
                                     global);
  MatrixXd x = gather(shard);
  std::vector<std::uint8_t> labels = gather_labels(shard);
  std::vector<double> grad;
  for (int j = 0; j < cfg.local_iters; ++j)
    m = step_on_matrix(m, x, labels, cfg.learning_rate, grad);
  return m.params;
}

}  // namespace mafl

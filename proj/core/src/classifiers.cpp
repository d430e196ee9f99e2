#include "eegdep/classifiers.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>
#include <numeric>

#include "eegdep/errors.hpp"
#include "eegdep/rng.hpp"

namespace eegdep {

namespace {

constexpr double kNbVarianceFloor = 1e-9;
constexpr int kModelFormatVersion = 1;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(u)) without overflow.
double softplus(double u) { return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))); }

void check_training_input(const Eigen::MatrixXd& x, const std::vector<Label>& y,
                          std::size_t min_rows) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "feature rows and labels differ in count");
  }
  if (static_cast<std::size_t>(x.rows()) < min_rows) {
    throw Error(ErrorCode::InsufficientData,
                "training needs at least " + std::to_string(min_rows) + " rows");
  }
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (!std::isfinite(x(r, c))) {
        throw Error(ErrorCode::NonFiniteFeature, "non-finite value at row " + std::to_string(r) +
                                                     ", column " + std::to_string(c));
      }
    }
  }
}

void require_both_classes(const std::vector<Label>& y, const char* kind) {
  bool has_nc = false;
  bool has_mdd = false;
  for (Label l : y) (l == Label::MDD ? has_mdd : has_nc) = true;
  if (!has_nc || !has_mdd) {
    throw Error(ErrorCode::SingleClassTraining,
                std::string(kind) + " training requires both classes");
  }
}

LrParams train_lr(const ModelSpec& spec, const Eigen::MatrixXd& x, const std::vector<Label>& y) {
  require_both_classes(y, "LR");
  const auto d = x.cols();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;

  Eigen::VectorXd grad_w(d);
  double grad_b = 0.0;
  double loss = lr_loss(x, y, w, b, spec.lr_ridge);
  for (int iter = 0; iter < spec.lr_max_iters; ++iter) {
    lr_gradient(x, y, w, b, spec.lr_ridge, grad_w, grad_b);
    const double gnorm2 = grad_w.squaredNorm() + grad_b * grad_b;
    if (std::sqrt(gnorm2) < spec.lr_tol) break;

    // Backtracking line search with the Armijo condition.
    double step = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Eigen::VectorXd w_try = w - step * grad_w;
      const double b_try = b - step * grad_b;
      const double loss_try = lr_loss(x, y, w_try, b_try, spec.lr_ridge);
      if (loss_try <= loss - 1e-4 * step * gnorm2) {
        w = w_try;
        b = b_try;
        loss = loss_try;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return {std::move(w), b};
}

NbParams train_nb(const Eigen::MatrixXd& x, const std::vector<Label>& y) {
  require_both_classes(y, "NB");
  const auto d = x.cols();
  NbParams params;
  params.mean = Eigen::MatrixXd::Zero(2, d);
  params.var = Eigen::MatrixXd::Zero(2, d);

  std::array<double, 2> count{0.0, 0.0};
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const std::size_t cls = y[static_cast<std::size_t>(r)] == Label::MDD ? 1 : 0;
    count[cls] += 1.0;
    params.mean.row(static_cast<Eigen::Index>(cls)) += x.row(r);
  }
  for (std::size_t cls = 0; cls < 2; ++cls) {
    params.mean.row(static_cast<Eigen::Index>(cls)) /= count[cls];
    params.log_prior[cls] = std::log(count[cls] / static_cast<double>(x.rows()));
  }
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const auto cls = static_cast<Eigen::Index>(y[static_cast<std::size_t>(r)] == Label::MDD);
    params.var.row(cls) += (x.row(r) - params.mean.row(cls)).array().square().matrix();
  }
  for (std::size_t cls = 0; cls < 2; ++cls) {
    params.var.row(static_cast<Eigen::Index>(cls)) /= count[cls];
  }
  params.var = params.var.cwiseMax(kNbVarianceFloor);
  return params;
}

double counts_entropy(std::int64_t a, std::int64_t b) {
  const auto n = static_cast<double>(a + b);
  double h = 0.0;
  for (std::int64_t c : {a, b}) {
    if (c > 0) {
      const double p = static_cast<double>(c) / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

struct DtBuilder {
  const Eigen::MatrixXd& x;
  const std::vector<Label>& y;
  int min_leaf;
  std::vector<DtNode> nodes;
  // Per-feature row order sorted once up front; node scans then walk each
  // order filtered by membership instead of re-sorting.
  std::vector<std::vector<Eigen::Index>> orders;
  std::vector<char> in_node;

  void presort(const std::vector<Eigen::Index>& rows) {
    orders.assign(static_cast<std::size_t>(x.cols()), rows);
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
      auto& order = orders[static_cast<std::size_t>(f)];
      std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (x(a, f) != x(b, f)) return x(a, f) < x(b, f);
        return a < b;
      });
    }
    in_node.assign(static_cast<std::size_t>(x.rows()), 0);
  }

  int grow(std::vector<Eigen::Index> rows) {
    DtNode node;
    for (const Eigen::Index r : rows) {
      ++node.counts[y[static_cast<std::size_t>(r)] == Label::MDD ? 1 : 0];
    }
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(node);

    const double parent_h = counts_entropy(node.counts[0], node.counts[1]);
    if (node.counts[0] == 0 || node.counts[1] == 0 ||
        rows.size() < static_cast<std::size_t>(2 * min_leaf)) {
      return id;
    }

    for (const Eigen::Index r : rows) in_node[static_cast<std::size_t>(r)] = 1;

    // Best threshold over all features: midpoints of adjacent distinct
    // values, both children at least min_leaf rows, ties to the lowest
    // feature index then lowest threshold.
    double best_gain = 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<double> values;
    std::vector<int> classes;
    values.reserve(rows.size());
    classes.reserve(rows.size());
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
      values.clear();
      classes.clear();
      for (const Eigen::Index r : orders[static_cast<std::size_t>(f)]) {
        if (!in_node[static_cast<std::size_t>(r)]) continue;
        values.push_back(x(r, f));
        classes.push_back(y[static_cast<std::size_t>(r)] == Label::MDD ? 1 : 0);
      }
      std::array<std::int64_t, 2> left{0, 0};
      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        ++left[static_cast<std::size_t>(classes[i])];
        if (values[i] == values[i + 1]) continue;
        const auto n_left = static_cast<std::int64_t>(i + 1);
        const auto n_right = static_cast<std::int64_t>(values.size()) - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        const std::array<std::int64_t, 2> right{node.counts[0] - left[0],
                                                node.counts[1] - left[1]};
        const double child_h =
            (static_cast<double>(n_left) * counts_entropy(left[0], left[1]) +
             static_cast<double>(n_right) * counts_entropy(right[0], right[1])) /
            static_cast<double>(values.size());
        const double gain = parent_h - child_h;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (values[i] + values[i + 1]);
        }
      }
    }
    for (const Eigen::Index r : rows) in_node[static_cast<std::size_t>(r)] = 0;
    if (best_feature < 0) return id;

    std::vector<Eigen::Index> left_rows;
    std::vector<Eigen::Index> right_rows;
    for (const Eigen::Index r : rows) {
      (x(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const int left_id = grow(std::move(left_rows));
    const int right_id = grow(std::move(right_rows));
    nodes[static_cast<std::size_t>(id)].feature = best_feature;
    nodes[static_cast<std::size_t>(id)].threshold = best_threshold;
    nodes[static_cast<std::size_t>(id)].left = left_id;
    nodes[static_cast<std::size_t>(id)].right = right_id;
    return id;
  }
};

Label dt_node_majority(const DtNode& node) {
  return node.counts[1] > node.counts[0] ? Label::MDD : Label::NC;
}

// Reduced-error pruning: collapse any subtree whose holdout error is not
// beaten by keeping it. Returns this subtree's holdout error after pruning.
std::int64_t prune_rep(std::vector<DtNode>& nodes, int id, const Eigen::MatrixXd& hx,
                       const std::vector<Label>& hy, std::vector<int>& route) {
  DtNode& node = nodes[static_cast<std::size_t>(id)];
  std::int64_t holdout_here = 0;
  std::int64_t leaf_errors = 0;
  const Label majority = dt_node_majority(node);
  for (std::size_t i = 0; i < route.size(); ++i) {
    if (route[i] != id) continue;
    ++holdout_here;
    if (hy[i] != majority) ++leaf_errors;
  }
  if (node.feature < 0) return leaf_errors;

  // Route held-out rows one level down, then prune children first.
  for (std::size_t i = 0; i < route.size(); ++i) {
    if (route[i] != id) continue;
    route[i] = hx(static_cast<Eigen::Index>(i), node.feature) <= node.threshold ? node.left
                                                                                : node.right;
  }
  const std::int64_t subtree_errors = prune_rep(nodes, node.left, hx, hy, route) +
                                      prune_rep(nodes, node.right, hx, hy, route);
  if (holdout_here > 0 && leaf_errors <= subtree_errors) {
    node.feature = -1;
    node.left = -1;
    node.right = -1;
    return leaf_errors;
  }
  return subtree_errors;
}

// Drop nodes orphaned by pruning and reindex depth-first.
std::vector<DtNode> compact_tree(const std::vector<DtNode>& nodes) {
  std::vector<DtNode> out;
  struct Frame {
    int old_id;
    int parent_new;
    bool is_left;
  };
  std::vector<Frame> frames{{0, -1, false}};
  while (!frames.empty()) {
    const Frame fr = frames.back();
    frames.pop_back();
    const DtNode& src = nodes[static_cast<std::size_t>(fr.old_id)];
    const int new_id = static_cast<int>(out.size());
    out.push_back(src);
    out.back().left = -1;
    out.back().right = -1;
    if (fr.parent_new >= 0) {
      (fr.is_left ? out[static_cast<std::size_t>(fr.parent_new)].left
                  : out[static_cast<std::size_t>(fr.parent_new)].right) = new_id;
    }
    if (src.feature >= 0) {
      // Push right first so the left child lands next in depth-first order.
      frames.push_back({src.right, new_id, false});
      frames.push_back({src.left, new_id, true});
    }
  }
  return out;
}

DtParams train_dt(const ModelSpec& spec, const Eigen::MatrixXd& x, const std::vector<Label>& y) {
  require_both_classes(y, "DT");
  if (spec.dt_min_leaf < 1) throw Error(ErrorCode::ConfigError, "dt_min_leaf must be >= 1");
  if (spec.dt_pruning_folds < 2) {
    throw Error(ErrorCode::ConfigError, "dt_pruning_folds must be >= 2");
  }
  const auto n = static_cast<std::size_t>(x.rows());

  // Stratified 1-in-folds holdout for reduced-error pruning.
  std::array<std::vector<Eigen::Index>, 2> by_class;
  for (std::size_t i = 0; i < n; ++i) {
    by_class[y[i] == Label::MDD ? 1 : 0].push_back(static_cast<Eigen::Index>(i));
  }
  Rng rng(spec.dt_seed);
  std::vector<Eigen::Index> grow_rows;
  std::vector<Eigen::Index> holdout_rows;
  for (auto& rows : by_class) {
    rng.shuffle(rows);
    const std::size_t held = rows.size() / static_cast<std::size_t>(spec.dt_pruning_folds);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      (i < held ? holdout_rows : grow_rows).push_back(rows[i]);
    }
  }
  std::sort(grow_rows.begin(), grow_rows.end());
  std::sort(holdout_rows.begin(), holdout_rows.end());

  DtBuilder builder{x, y, spec.dt_min_leaf, {}, {}, {}};
  builder.presort(grow_rows);
  builder.grow(grow_rows);

  if (!holdout_rows.empty()) {
    Eigen::MatrixXd hx(static_cast<Eigen::Index>(holdout_rows.size()), x.cols());
    std::vector<Label> hy(holdout_rows.size());
    for (std::size_t i = 0; i < holdout_rows.size(); ++i) {
      hx.row(static_cast<Eigen::Index>(i)) = x.row(holdout_rows[i]);
      hy[i] = y[static_cast<std::size_t>(holdout_rows[i])];
    }
    std::vector<int> route(holdout_rows.size(), 0);
    prune_rep(builder.nodes, 0, hx, hy, route);
  }
  return {compact_tree(builder.nodes)};
}

std::string default_row_id(std::size_t index) { return std::to_string(index); }

}  // namespace

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::LR: return "LR";
    case ModelKind::KNN: return "KNN";
    case ModelKind::DT: return "DT";
    case ModelKind::NB: return "NB";
  }
  return "LR";
}

ModelKind parse_model_kind(const std::string& text) {
  std::string upper;
  for (char c : text) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (upper == "LR") return ModelKind::LR;
  if (upper == "KNN") return ModelKind::KNN;
  if (upper == "DT") return ModelKind::DT;
  if (upper == "NB") return ModelKind::NB;
  throw Error(ErrorCode::ConfigError, "unknown model kind: " + text);
}

void to_json(nlohmann::json& j, const ModelSpec& spec) {
  j = nlohmann::json{{"kind", model_kind_name(spec.kind)}};
  switch (spec.kind) {
    case ModelKind::LR:
      j["ridge"] = spec.lr_ridge;
      j["max_iters"] = spec.lr_max_iters;
      j["tol"] = spec.lr_tol;
      break;
    case ModelKind::KNN:
      j["k"] = spec.knn_k;
      break;
    case ModelKind::DT:
      j["min_leaf"] = spec.dt_min_leaf;
      j["pruning_folds"] = spec.dt_pruning_folds;
      j["seed"] = spec.dt_seed;
      break;
    case ModelKind::NB:
      break;
  }
}

void from_json(const nlohmann::json& j, ModelSpec& spec) {
  ModelSpec out;
  try {
    out.kind = parse_model_kind(j.at("kind").get<std::string>());
    out.lr_ridge = j.value("ridge", out.lr_ridge);
    out.lr_max_iters = j.value("max_iters", out.lr_max_iters);
    out.lr_tol = j.value("tol", out.lr_tol);
    out.knn_k = j.value("k", out.knn_k);
    out.dt_min_leaf = j.value("min_leaf", out.dt_min_leaf);
    out.dt_pruning_folds = j.value("pruning_folds", out.dt_pruning_folds);
    out.dt_seed = j.value("seed", out.dt_seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad model spec: ") + e.what());
  }
  spec = out;
}

double lr_loss(const Eigen::MatrixXd& x, const std::vector<Label>& y, const Eigen::VectorXd& w,
               double b, double ridge) {
  double nll = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double z = x.row(r).dot(w) + b;
    const double sign = y[static_cast<std::size_t>(r)] == Label::MDD ? 1.0 : -1.0;
    nll += softplus(-sign * z);
  }
  return nll / static_cast<double>(x.rows()) + 0.5 * ridge * w.squaredNorm();
}

void lr_gradient(const Eigen::MatrixXd& x, const std::vector<Label>& y, const Eigen::VectorXd& w,
                 double b, double ridge, Eigen::VectorXd& grad_w, double& grad_b) {
  grad_w.setZero();
  grad_b = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double p = sigmoid(x.row(r).dot(w) + b);
    const double residual = p - (y[static_cast<std::size_t>(r)] == Label::MDD ? 1.0 : 0.0);
    grad_w += residual * x.row(r).transpose();
    grad_b += residual;
  }
  grad_w /= static_cast<double>(x.rows());
  grad_b /= static_cast<double>(x.rows());
  grad_w += ridge * w;
}

TrainedModel::TrainedModel(ModelSpec spec, Eigen::Index arity,
                           std::variant<LrParams, KnnParams, DtParams, NbParams> params)
    : spec_(spec), arity_(arity), params_(std::move(params)) {}

TrainedModel train(const ModelSpec& spec, const Eigen::MatrixXd& x, const std::vector<Label>& y,
                   std::vector<std::string> row_ids) {
  check_training_input(x, y, spec.kind == ModelKind::KNN ? 1 : 2);
  switch (spec.kind) {
    case ModelKind::LR:
      return {spec, x.cols(), train_lr(spec, x, y)};
    case ModelKind::KNN: {
      if (spec.knn_k < 1) throw Error(ErrorCode::ConfigError, "knn_k must be >= 1");
      if (row_ids.empty()) {
        for (std::size_t i = 0; i < y.size(); ++i) row_ids.push_back(default_row_id(i));
      }
      if (row_ids.size() != y.size()) {
        throw Error(ErrorCode::LengthMismatch, "row_ids and labels differ in count");
      }
      return {spec, x.cols(), KnnParams{x, y, std::move(row_ids)}};
    }
    case ModelKind::DT:
      return {spec, x.cols(), train_dt(spec, x, y)};
    case ModelKind::NB:
      return {spec, x.cols(), train_nb(x, y)};
  }
  throw Error(ErrorCode::ConfigError, "unknown model kind");
}

Prediction TrainedModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != arity_) {
    throw Error(ErrorCode::ArityMismatch, "query has " + std::to_string(x.size()) +
                                              " features, model expects " +
                                              std::to_string(arity_));
  }
  switch (spec_.kind) {
    case ModelKind::LR: {
      const auto& p = std::get<LrParams>(params_);
      const double score = sigmoid(p.weights.dot(x) + p.bias);
      return {score > 0.5 ? Label::MDD : Label::NC, score};
    }
    case ModelKind::KNN: {
      const auto& p = std::get<KnnParams>(params_);
      const auto n = static_cast<std::size_t>(p.points.rows());
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(spec_.knn_k), n);
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::vector<double> dist2(n);
      for (std::size_t i = 0; i < n; ++i) {
        dist2[i] = (p.points.row(static_cast<Eigen::Index>(i)).transpose() - x).squaredNorm();
      }
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                        order.end(), [&](std::size_t a, std::size_t b) {
                          if (dist2[a] != dist2[b]) return dist2[a] < dist2[b];
                          return p.row_ids[a] < p.row_ids[b];
                        });
      std::size_t votes_mdd = 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (p.labels[order[i]] == Label::MDD) ++votes_mdd;
      }
      const double score = static_cast<double>(votes_mdd) / static_cast<double>(k);
      // A tied vote falls to NC.
      return {2 * votes_mdd > k ? Label::MDD : Label::NC, score};
    }
    case ModelKind::DT: {
      const auto& p = std::get<DtParams>(params_);
      const DtNode* node = &p.nodes[0];
      while (node->feature >= 0) {
        node = &p.nodes[static_cast<std::size_t>(
            x[node->feature] <= node->threshold ? node->left : node->right)];
      }
      const double score = (static_cast<double>(node->counts[1]) + 1.0) /
                           (static_cast<double>(node->counts[0] + node->counts[1]) + 2.0);
      return {dt_node_majority(*node), score};
    }
    case ModelKind::NB: {
      const auto& p = std::get<NbParams>(params_);
      std::array<double, 2> log_post{};
      for (std::size_t cls = 0; cls < 2; ++cls) {
        const auto c = static_cast<Eigen::Index>(cls);
        double lp = p.log_prior[cls];
        for (Eigen::Index f = 0; f < arity_; ++f) {
          const double var = p.var(c, f);
          const double dev = x[f] - p.mean(c, f);
          lp += -0.5 * std::log(2.0 * std::numbers::pi * var) - dev * dev / (2.0 * var);
        }
        log_post[cls] = lp;
      }
      const double hi = std::max(log_post[0], log_post[1]);
      const double e0 = std::exp(log_post[0] - hi);
      const double e1 = std::exp(log_post[1] - hi);
      const double score = e1 / (e0 + e1);
      return {log_post[1] > log_post[0] ? Label::MDD : Label::NC, score};
    }
  }
  throw Error(ErrorCode::ConfigError, "unknown model kind");
}

nlohmann::json TrainedModel::to_json() const {
  nlohmann::json spec_json;
  eegdep::to_json(spec_json, spec_);
  nlohmann::json params;
  switch (spec_.kind) {
    case ModelKind::LR: {
      const auto& p = std::get<LrParams>(params_);
      params["weights"] = std::vector<double>(p.weights.data(), p.weights.data() + p.weights.size());
      params["bias"] = p.bias;
      break;
    }
    case ModelKind::KNN: {
      const auto& p = std::get<KnnParams>(params_);
      nlohmann::json points = nlohmann::json::array();
      for (Eigen::Index r = 0; r < p.points.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < p.points.cols(); ++c) row.push_back(p.points(r, c));
        points.push_back(std::move(row));
      }
      params["points"] = std::move(points);
      nlohmann::json labels = nlohmann::json::array();
      for (Label l : p.labels) labels.push_back(label_name(l));
      params["labels"] = std::move(labels);
      params["row_ids"] = p.row_ids;
      break;
    }
    case ModelKind::DT: {
      const auto& p = std::get<DtParams>(params_);
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& node : p.nodes) {
        nodes.push_back({{"feature", node.feature},
                         {"threshold", node.threshold},
                         {"left", node.left},
                         {"right", node.right},
                         {"counts", {node.counts[0], node.counts[1]}}});
      }
      params["nodes"] = std::move(nodes);
      break;
    }
    case ModelKind::NB: {
      const auto& p = std::get<NbParams>(params_);
      params["log_prior"] = {p.log_prior[0], p.log_prior[1]};
      auto matrix_json = [](const Eigen::MatrixXd& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
          nlohmann::json row = nlohmann::json::array();
          for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
          rows.push_back(std::move(row));
        }
        return rows;
      };
      params["mean"] = matrix_json(p.mean);
      params["var"] = matrix_json(p.var);
      break;
    }
  }
  return nlohmann::json{{"format_version", kModelFormatVersion},
                        {"kind", model_kind_name(spec_.kind)},
                        {"arity", arity_},
                        {"hyperparameters", spec_json},
                        {"parameters", params}};
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kModelFormatVersion) {
      throw Error(ErrorCode::SchemaError, "unsupported model format version");
    }
    ModelSpec spec;
    eegdep::from_json(j.at("hyperparameters"), spec);
    const auto arity = j.at("arity").get<Eigen::Index>();
    const auto& params = j.at("parameters");
    switch (spec.kind) {
      case ModelKind::LR: {
        LrParams p;
        const auto w = params.at("weights").get<std::vector<double>>();
        p.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
        p.bias = params.at("bias").get<double>();
        return {spec, arity, std::move(p)};
      }
      case ModelKind::KNN: {
        KnnParams p;
        const auto& points = params.at("points");
        p.points.resize(static_cast<Eigen::Index>(points.size()), arity);
        for (Eigen::Index r = 0; r < p.points.rows(); ++r) {
          const auto row = points[static_cast<std::size_t>(r)].get<std::vector<double>>();
          if (static_cast<Eigen::Index>(row.size()) != arity) {
            throw Error(ErrorCode::SchemaError, "KNN point arity mismatch");
          }
          for (Eigen::Index c = 0; c < arity; ++c) p.points(r, c) = row[static_cast<std::size_t>(c)];
        }
        for (const auto& l : params.at("labels")) p.labels.push_back(parse_label(l.get<std::string>()));
        p.row_ids = params.at("row_ids").get<std::vector<std::string>>();
        return {spec, arity, std::move(p)};
      }
      case ModelKind::DT: {
        DtParams p;
        for (const auto& nj : params.at("nodes")) {
          DtNode node;
          node.feature = nj.at("feature").get<int>();
          node.threshold = nj.at("threshold").get<double>();
          node.left = nj.at("left").get<int>();
          node.right = nj.at("right").get<int>();
          node.counts = {nj.at("counts")[0].get<std::int64_t>(),
                         nj.at("counts")[1].get<std::int64_t>()};
          p.nodes.push_back(node);
        }
        return {spec, arity, std::move(p)};
      }
      case ModelKind::NB: {
        NbParams p;
        p.log_prior = {params.at("log_prior")[0].get<double>(),
                       params.at("log_prior")[1].get<double>()};
        auto matrix_from = [arity](const nlohmann::json& rows) {
          Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), arity);
          for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const auto row = rows[static_cast<std::size_t>(r)].get<std::vector<double>>();
            for (Eigen::Index c = 0; c < arity; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
          }
          return m;
        };
        p.mean = matrix_from(params.at("mean"));
        p.var = matrix_from(params.at("var"));
        return {spec, arity, std::move(p)};
      }
    }
    throw Error(ErrorCode::SchemaError, "unknown model kind in document");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("bad model document: ") + e.what());
  }
}

}  // namespace eegdep

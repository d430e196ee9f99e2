#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <variant>
#include <vector>

#include "eegdep/signal.hpp"

namespace eegdep {

enum class ModelKind { LR, KNN, DT, NB };

const char* model_kind_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);  // ConfigError

struct ModelSpec {
  ModelKind kind{ModelKind::LR};
  // LR: ridge penalty on weights (not bias), gradient-descent stopping rule.
  double lr_ridge{1e-8};
  int lr_max_iters{1000};
  double lr_tol{1e-6};
  // KNN
  int knn_k{3};
  // DT: minimum instances per leaf and the seeded 1-in-5 pruning holdout.
  int dt_min_leaf{2};
  int dt_pruning_folds{5};
  std::uint64_t dt_seed{1};
};

void to_json(nlohmann::json& j, const ModelSpec& spec);
void from_json(const nlohmann::json& j, ModelSpec& spec);

struct Prediction {
  Label label{Label::NC};
  double score{0.0};  // probability or vote fraction for the MDD class
};

struct LrParams {
  Eigen::VectorXd weights;
  double bias{0.0};
};

struct KnnParams {
  Eigen::MatrixXd points;
  std::vector<Label> labels;
  std::vector<std::string> row_ids;  // distance tie-break, lexicographic
};

struct NbParams {
  std::array<double, 2> log_prior{0.0, 0.0};  // [NC, MDD]
  Eigen::MatrixXd mean;                       // 2 x d
  Eigen::MatrixXd var;                        // 2 x d, floored
};

struct DtNode {
  int feature{-1};  // -1 = leaf
  double threshold{0.0};
  int left{-1};
  int right{-1};
  std::array<std::int64_t, 2> counts{0, 0};  // [NC, MDD] training instances
};

struct DtParams {
  std::vector<DtNode> nodes;  // nodes[0] is the root
};

class TrainedModel {
 public:
  TrainedModel(ModelSpec spec, Eigen::Index arity,
               std::variant<LrParams, KnnParams, DtParams, NbParams> params);

  ModelKind kind() const { return spec_.kind; }
  const ModelSpec& spec() const { return spec_; }
  Eigen::Index arity() const { return arity_; }

  template <typename T>
  const T& params() const {
    return std::get<T>(params_);
  }

  Prediction predict(const Eigen::VectorXd& x) const;  // ArityMismatch

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);

 private:
  ModelSpec spec_;
  Eigen::Index arity_;
  std::variant<LrParams, KnnParams, DtParams, NbParams> params_;
};

// row_ids name training rows for KNN tie-breaking; empty means row indices.
TrainedModel train(const ModelSpec& spec, const Eigen::MatrixXd& x,
                   const std::vector<Label>& y, std::vector<std::string> row_ids = {});

// Regularized mean negative log-likelihood and its gradient, exposed so the
// optimizer is checkable against finite differences.
double lr_loss(const Eigen::MatrixXd& x, const std::vector<Label>& y,
               const Eigen::VectorXd& w, double b, double ridge);
void lr_gradient(const Eigen::MatrixXd& x, const std::vector<Label>& y,
                 const Eigen::VectorXd& w, double b, double ridge, Eigen::VectorXd& grad_w,
                 double& grad_b);

}  // namespace eegdep

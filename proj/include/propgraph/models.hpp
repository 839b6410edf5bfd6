#ifndef PROPGRAPH_MODELS_HPP
#define PROPGRAPH_MODELS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "propgraph/bounds.hpp"
#include "propgraph/graph.hpp"

namespace propgraph {

enum class Arch { MeanGnn, Gat, Gin, Transformer };
enum class PausePlacement { Prepend, Append };

Arch arch_from_string(const std::string& s);
std::string to_string(Arch a);

// All reference models use fixed seeded weights; nothing is trained.
struct ModelConfig {
  Arch arch = Arch::MeanGnn;
  int layers = 1;
  int dim = 4;
  std::uint64_t seed = 0;

  bool causal = false;       // transformer only
  bool residual = false;
  bool layernorm = false;
  double gin_epsilon = 0.0;
  bool differential = false; // transformer: (softmax1 - lambda*softmax2) V
  double differential_lambda = 0.0;
  int pause_count = 0;
  PausePlacement pause_placement = PausePlacement::Append;
  bool sink_token = false;

  bool linear_mode = false;       // identity activations, no layernorm
  bool unit_weights = false;      // mean_gnn: W_self = 0, W_agg = I (exact oracles)
  bool include_self = true;       // mean_gnn: lazy self-inclusive averaging
  bool uniform_attention = false; // transformer: zero logits (uniform over visible)
  bool pure_attention = false;    // transformer: mixing only, V = H, no W_v/W_o

  void validate() const;
};

struct LayerTrace {
  std::vector<Eigen::MatrixXd> features;   // H^(0)..H^(L), token-extended rows
  // Applied attention map per layer (row-stochastic for standard attention,
  // rows summing to 1-lambda for differential). Empty for mean_gnn/gin.
  std::vector<Eigen::MatrixXd> attention;
  std::vector<Eigen::VectorXd> value_norms;  // per layer, per position ||v||
  int inserted_prefix = 0;  // sink + prepended pause rows
  int inserted_suffix = 0;  // appended pause rows
};

class Model {
public:
  explicit Model(ModelConfig cfg);

  const ModelConfig& config() const { return cfg_; }

  // Token insertion (sink/pause) prepends/appends rows and extends the
  // causal graph before the first layer.
  Graph effective_graph(const Graph& g) const;
  Eigen::MatrixXd extend_input(const Eigen::MatrixXd& x) const;

  LayerTrace forward(const Graph& g, const Eigen::MatrixXd& x) const;

  // Runs layers from_layer..from_layer+span-1 on an already-extended state.
  Eigen::MatrixXd forward_span(const Graph& g, Eigen::MatrixXd h, int from_layer,
                               int span) const;

  struct Jacobian {
    Eigen::MatrixXd block;  // d x d, entry (a,b) = d h_u[a] / d h_v[b]
    double max_abs = 0.0;
  };
  // Central finite differences on the coordinates of h_v^(from_layer),
  // re-running only the spanned layers. Indices refer to extended rows.
  Jacobian empirical_jacobian(const Graph& g, const Eigen::MatrixXd& x,
                              int from_layer, int span, int u, int v) const;

  // Spectral-norm-derived constants consistent with the actual layer maps;
  // exact for linear_mode, certified upper estimates otherwise.
  BoundSpec lipschitz_constants() const;

  const Eigen::MatrixXd& weight(int layer, const std::string& name) const;

private:
  Eigen::MatrixXd layer_step(const Graph& g, const Eigen::MatrixXd& h, int layer,
                             Eigen::MatrixXd* attention_out,
                             Eigen::VectorXd* value_norms_out) const;

  ModelConfig cfg_;
  std::map<std::pair<int, std::string>, Eigen::MatrixXd> weights_;
};

// Deterministic feature matrix for experiments; stream is independent of
// model weight streams.
Eigen::MatrixXd seeded_features(int n, int d, std::uint64_t seed,
                                const std::string& name);

}  // namespace propgraph

#endif

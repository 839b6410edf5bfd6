#include "propgraph/models.hpp"

#include <cmath>

namespace propgraph {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic uniform(-scale, scale) stream; avoids implementation-defined
// std distributions so weights are bit-identical across toolchains.
class Stream {
public:
  Stream(std::uint64_t seed, std::uint64_t layer, const std::string& name)
      : state_(splitmix64(seed ^ splitmix64(layer ^ fnv1a(name)))) {}

  double uniform(double scale) {
    state_ = splitmix64(state_);
    double u = static_cast<double>(state_ >> 11) * 0x1.0p-53;  // [0,1)
    return scale * (2.0 * u - 1.0);
  }

  Eigen::MatrixXd matrix(int rows, int cols, double scale) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = uniform(scale);
    return m;
  }

private:
  std::uint64_t state_;
};

Eigen::MatrixXd row_softmax(const Eigen::MatrixXd& logits,
                            const Eigen::Matrix<bool, Eigen::Dynamic,
                                                Eigen::Dynamic>& mask) {
  const int n = static_cast<int>(logits.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (mask(i, j)) mx = std::max(mx, logits(i, j));
    double sum = 0.0;
    for (int j = 0; j < n; ++j)
      if (mask(i, j)) {
        out(i, j) = std::exp(logits(i, j) - mx);
        sum += out(i, j);
      }
    if (sum > 0.0) out.row(i) /= sum;
  }
  return out;
}

Eigen::MatrixXd layer_norm_rows(const Eigen::MatrixXd& h) {
  Eigen::MatrixXd out = h;
  for (int i = 0; i < h.rows(); ++i) {
    double mean = h.row(i).mean();
    double var = (h.row(i).array() - mean).square().mean();
    out.row(i) = (h.row(i).array() - mean) / std::sqrt(var + 1e-5);
  }
  return out;
}

}  // namespace

Arch arch_from_string(const std::string& s) {
  if (s == "mean_gnn") return Arch::MeanGnn;
  if (s == "gat") return Arch::Gat;
  if (s == "gin") return Arch::Gin;
  if (s == "transformer") return Arch::Transformer;
  throw Error(ErrorCode::InvalidInput, "unknown arch: " + s);
}

std::string to_string(Arch a) {
  switch (a) {
    case Arch::MeanGnn: return "mean_gnn";
    case Arch::Gat: return "gat";
    case Arch::Gin: return "gin";
    case Arch::Transformer: return "transformer";
  }
  return "unknown";
}

void ModelConfig::validate() const {
  require(layers >= 1, ErrorCode::InvalidInput, "config: layers >= 1");
  require(dim >= 1, ErrorCode::InvalidInput, "config: dim >= 1");
  bool transformer = arch == Arch::Transformer;
  require(!causal || transformer, ErrorCode::InvalidInput,
          "config: causal flag is transformer-only");
  for (auto [flag, name] : std::initializer_list<std::pair<bool, const char*>>{
           {differential, "differential"},
           {uniform_attention, "uniform_attention"},
           {pure_attention, "pure_attention"}})
    require(!flag || transformer, ErrorCode::InvalidInput,
            std::string("config: ") + name + " is transformer-only");
  require(pause_count >= 0, ErrorCode::InvalidInput, "config: pause_count >= 0");
  require(pause_count == 0 || (transformer && causal), ErrorCode::InvalidInput,
          "config: pause tokens require a causal transformer");
  require(!sink_token || (transformer && causal), ErrorCode::InvalidInput,
          "config: sink token requires a causal transformer");
  require(differential_lambda >= 0.0, ErrorCode::InvalidInput,
          "config: differential_lambda >= 0");
  require(gin_epsilon == 0.0 || arch == Arch::Gin, ErrorCode::InvalidInput,
          "config: gin_epsilon is gin-only");
  require(!unit_weights || arch == Arch::MeanGnn, ErrorCode::InvalidInput,
          "config: unit_weights is mean_gnn-only");
}

Model::Model(ModelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const int d = cfg_.dim;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  auto draw = [&](int layer, const std::string& name, int rows, int cols) {
    Stream s(cfg_.seed, static_cast<std::uint64_t>(layer), name);
    weights_[{layer, name}] = s.matrix(rows, cols, scale);
  };
  for (int l = 0; l < cfg_.layers; ++l) {
    switch (cfg_.arch) {
      case Arch::MeanGnn:
        if (cfg_.unit_weights) {
          weights_[{l, "w_self"}] = Eigen::MatrixXd::Zero(d, d);
          weights_[{l, "w_agg"}] = Eigen::MatrixXd::Identity(d, d);
        } else {
          draw(l, "w_self", d, d);
          draw(l, "w_agg", d, d);
        }
        break;
      case Arch::Gin:
        draw(l, "w1", d, d);
        draw(l, "w2", d, d);
        break;
      case Arch::Gat:
        draw(l, "w", d, d);
        draw(l, "w_score", 2 * d, d);
        draw(l, "a_score", d, 1);
        break;
      case Arch::Transformer:
        if (cfg_.uniform_attention) {
          weights_[{l, "w_q1"}] = Eigen::MatrixXd::Zero(d, d);
          weights_[{l, "w_k1"}] = Eigen::MatrixXd::Zero(d, d);
        } else {
          draw(l, "w_q1", d, d);
          draw(l, "w_k1", d, d);
        }
        if (cfg_.differential) {
          if (cfg_.uniform_attention) {
            weights_[{l, "w_q2"}] = Eigen::MatrixXd::Zero(d, d);
            weights_[{l, "w_k2"}] = Eigen::MatrixXd::Zero(d, d);
          } else {
            draw(l, "w_q2", d, d);
            draw(l, "w_k2", d, d);
          }
        }
        if (!cfg_.pure_attention) {
          draw(l, "w_v", d, d);
          draw(l, "w_o", d, d);
        }
        break;
    }
  }
  if (cfg_.sink_token) draw(-1, "sink_embed", 1, d);
  if (cfg_.pause_count > 0) draw(-1, "pause_embed", cfg_.pause_count, d);
}

const Eigen::MatrixXd& Model::weight(int layer, const std::string& name) const {
  auto it = weights_.find({layer, name});
  require(it != weights_.end(), ErrorCode::Internal,
          "missing weight " + name + " at layer " + std::to_string(layer));
  return it->second;
}

Graph Model::effective_graph(const Graph& g) const {
  int extra = (cfg_.sink_token ? 1 : 0) + cfg_.pause_count;
  if (extra == 0) return g;
  // Token insertion is causal-transformer-only (validated); the extended
  // sequence is again a causal graph.
  return Graph::causal(g.node_count() + extra);
}

Eigen::MatrixXd Model::extend_input(const Eigen::MatrixXd& x) const {
  int prefix = (cfg_.sink_token ? 1 : 0) +
               (cfg_.pause_placement == PausePlacement::Prepend ? cfg_.pause_count : 0);
  int suffix = cfg_.pause_placement == PausePlacement::Append ? cfg_.pause_count : 0;
  if (prefix == 0 && suffix == 0) return x;
  Eigen::MatrixXd h(x.rows() + prefix + suffix, x.cols());
  int row = 0;
  if (cfg_.sink_token) h.row(row++) = weight(-1, "sink_embed").row(0);
  if (cfg_.pause_placement == PausePlacement::Prepend)
    for (int k = 0; k < cfg_.pause_count; ++k)
      h.row(row++) = weight(-1, "pause_embed").row(k);
  h.middleRows(row, x.rows()) = x;
  row += static_cast<int>(x.rows());
  if (cfg_.pause_placement == PausePlacement::Append)
    for (int k = 0; k < cfg_.pause_count; ++k)
      h.row(row++) = weight(-1, "pause_embed").row(k);
  return h;
}

Eigen::MatrixXd Model::layer_step(const Graph& g, const Eigen::MatrixXd& h,
                                  int layer, Eigen::MatrixXd* attention_out,
                                  Eigen::VectorXd* value_norms_out) const {
  const int n = static_cast<int>(h.rows());
  const int d = cfg_.dim;
  auto act = [&](Eigen::MatrixXd m) -> Eigen::MatrixXd {
    if (cfg_.linear_mode) return m;
    return m.array().tanh().matrix();
  };
  switch (cfg_.arch) {
    case Arch::MeanGnn: {
      Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, d);
      for (int i = 0; i < n; ++i) {
        const auto& nb = g.neighbors(i);
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(d);
        for (int j : nb) acc += h.row(j);
        double count = static_cast<double>(nb.size());
        if (cfg_.include_self) {
          acc += h.row(i);
          count += 1.0;
        }
        if (count > 0.0) mean.row(i) = acc / count;
      }
      return act(h * weight(layer, "w_self") + mean * weight(layer, "w_agg"));
    }
    case Arch::Gin: {
      Eigen::MatrixXd z = (1.0 + cfg_.gin_epsilon) * h;
      for (int i = 0; i < n; ++i)
        for (int j : g.neighbors(i)) z.row(i) += h.row(j);
      return act(z * weight(layer, "w1")) * weight(layer, "w2");
    }
    case Arch::Gat: {
      const Eigen::MatrixXd& ws = weight(layer, "w_score");
      const Eigen::MatrixXd& a = weight(layer, "a_score");
      Eigen::MatrixXd amap = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        const auto& nb = g.neighbors(i);
        if (nb.empty()) continue;
        Eigen::VectorXd scores(nb.size());
        for (size_t k = 0; k < nb.size(); ++k) {
          Eigen::RowVectorXd pair(2 * d);
          pair << h.row(i), h.row(nb[k]);
          Eigen::RowVectorXd e = pair * ws;
          if (!cfg_.linear_mode) e = e.array().tanh().matrix();
          scores(static_cast<int>(k)) = (e * a)(0, 0);
        }
        double mx = scores.maxCoeff();
        Eigen::VectorXd ex = (scores.array() - mx).exp();
        ex /= ex.sum();
        for (size_t k = 0; k < nb.size(); ++k)
          amap(i, nb[k]) = ex(static_cast<int>(k));
      }
      if (attention_out) *attention_out = amap;
      if (value_norms_out) *value_norms_out = h.rowwise().norm();
      return act(amap * h * weight(layer, "w"));
    }
    case Arch::Transformer: {
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mask(i, j) = i == j || g.has_edge(j, i);
      double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(d));
      auto logits = [&](const std::string& qn, const std::string& kn) {
        if (cfg_.uniform_attention) return Eigen::MatrixXd::Zero(n, n).eval();
        Eigen::MatrixXd q = h * weight(layer, qn);
        Eigen::MatrixXd k = h * weight(layer, kn);
        return (q * k.transpose() * inv_sqrt).eval();
      };
      Eigen::MatrixXd amap = row_softmax(logits("w_q1", "w_k1"), mask);
      if (cfg_.differential)
        amap -= cfg_.differential_lambda * row_softmax(logits("w_q2", "w_k2"), mask);
      Eigen::MatrixXd v = cfg_.pure_attention ? h : (h * weight(layer, "w_v")).eval();
      if (value_norms_out) *value_norms_out = v.rowwise().norm();
      if (attention_out) *attention_out = amap;
      Eigen::MatrixXd out = amap * v;
      if (!cfg_.pure_attention) out = out * weight(layer, "w_o");
      if (cfg_.residual) out = h + out;
      if (cfg_.layernorm && !cfg_.linear_mode) out = layer_norm_rows(out);
      return out;
    }
  }
  throw Error(ErrorCode::Internal, "unreachable arch");
}

LayerTrace Model::forward(const Graph& g, const Eigen::MatrixXd& x) const {
  require(x.rows() == g.node_count(), ErrorCode::InvalidInput,
          "forward: input rows must match graph node count");
  require(x.cols() == cfg_.dim, ErrorCode::InvalidInput,
          "forward: input width must match model dim");
  Graph eg = effective_graph(g);
  LayerTrace t;
  t.inserted_prefix = (cfg_.sink_token ? 1 : 0) +
                      (cfg_.pause_placement == PausePlacement::Prepend
                           ? cfg_.pause_count : 0);
  t.inserted_suffix =
      cfg_.pause_placement == PausePlacement::Append ? cfg_.pause_count : 0;
  Eigen::MatrixXd h = extend_input(x);
  t.features.push_back(h);
  for (int l = 0; l < cfg_.layers; ++l) {
    Eigen::MatrixXd amap;
    Eigen::VectorXd vnorm;
    h = layer_step(eg, h, l, &amap, &vnorm);
    require(h.allFinite(), ErrorCode::Internal,
            "forward: non-finite values at layer " + std::to_string(l + 1));
    t.features.push_back(h);
    if (amap.size() > 0) t.attention.push_back(amap);
    if (vnorm.size() > 0) t.value_norms.push_back(vnorm);
  }
  return t;
}

Eigen::MatrixXd Model::forward_span(const Graph& g, Eigen::MatrixXd h,
                                    int from_layer, int span) const {
  require(from_layer >= 0 && span >= 0 && from_layer + span <= cfg_.layers,
          ErrorCode::InvalidInput, "forward_span: layer range out of bounds");
  Graph eg = effective_graph(g);
  for (int l = from_layer; l < from_layer + span; ++l)
    h = layer_step(eg, h, l, nullptr, nullptr);
  require(h.allFinite(), ErrorCode::Internal, "forward_span: non-finite values");
  return h;
}

Model::Jacobian Model::empirical_jacobian(const Graph& g, const Eigen::MatrixXd& x,
                                          int from_layer, int span, int u,
                                          int v) const {
  LayerTrace base = forward(g, x);
  const Eigen::MatrixXd& h0 = base.features[from_layer];
  require(u >= 0 && u < h0.rows() && v >= 0 && v < h0.rows(),
          ErrorCode::InvalidInput, "empirical_jacobian: node out of range");
  const int d = cfg_.dim;
  Jacobian j;
  j.block.resize(d, d);
  if (span == 0) {
    j.block = Eigen::MatrixXd::Zero(d, d);
    if (u == v) j.block = Eigen::MatrixXd::Identity(d, d);
    j.max_abs = j.block.cwiseAbs().maxCoeff();
    return j;
  }
  const double step = 1e-5;  // central differences on unit-scale inputs
  for (int c = 0; c < d; ++c) {
    Eigen::MatrixXd hp = h0, hm = h0;
    hp(v, c) += step;
    hm(v, c) -= step;
    Eigen::MatrixXd outp = forward_span(g, hp, from_layer, span);
    Eigen::MatrixXd outm = forward_span(g, hm, from_layer, span);
    j.block.col(c) = (outp.row(u) - outm.row(u)).transpose() / (2.0 * step);
  }
  j.max_abs = j.block.cwiseAbs().maxCoeff();
  return j;
}

BoundSpec Model::lipschitz_constants() const {
  BoundSpec s;
  s.d = cfg_.dim;
  s.c_sigma = 1.0;  // tanh' <= 1; identity in linear_mode
  double alpha = 0.0, c_alpha = 0.0, c_beta = 0.0, w = 0.0;
  auto smax = [](const Eigen::MatrixXd& m) {
    return m.jacobiSvd().singularValues()(0);
  };
  for (int l = 0; l < cfg_.layers; ++l) {
    switch (cfg_.arch) {
      case Arch::MeanGnn: {
        const auto& ws = weight(l, "w_self");
        const auto& wa = weight(l, "w_agg");
        Eigen::MatrixXd stacked(2 * cfg_.dim, cfg_.dim);
        stacked << ws, wa;
        alpha = std::max(alpha, smax(stacked));
        c_alpha = std::max(c_alpha, smax(ws));
        c_beta = std::max(c_beta, smax(wa));
        w = std::max({w, ws.cwiseAbs().maxCoeff(), wa.cwiseAbs().maxCoeff()});
        break;
      }
      case Arch::Gin: {
        double p = smax(weight(l, "w1")) * smax(weight(l, "w2"));
        alpha = std::max(alpha, (1.0 + std::abs(cfg_.gin_epsilon)) * p);
        c_alpha = std::max(c_alpha, p);
        c_beta = std::max(c_beta, p);
        w = std::max({w, weight(l, "w1").cwiseAbs().maxCoeff(),
                      weight(l, "w2").cwiseAbs().maxCoeff()});
        break;
      }
      case Arch::Gat: {
        double p = smax(weight(l, "w"));
        alpha = std::max(alpha, p);
        c_alpha = std::max(c_alpha, p);
        c_beta = std::max(c_beta, p);
        w = std::max(w, weight(l, "w").cwiseAbs().maxCoeff());
        break;
      }
      case Arch::Transformer: {
        double p = cfg_.pure_attention
                       ? 1.0
                       : smax(weight(l, "w_v")) * smax(weight(l, "w_o"));
        if (cfg_.residual) p += 1.0;
        alpha = std::max(alpha, p);
        c_alpha = std::max(c_alpha, p);
        c_beta = std::max(c_beta, p);
        if (!cfg_.pure_attention)
          w = std::max({w, weight(l, "w_v").cwiseAbs().maxCoeff(),
                        weight(l, "w_o").cwiseAbs().maxCoeff()});
        break;
      }
    }
  }
  s.alpha = alpha;
  s.beta = 1.0;  // mean/softmax aggregation maps are nonexpansive
  s.c_alpha = c_alpha;
  s.c_beta = c_beta;
  s.w = w;
  return s;
}

Eigen::MatrixXd seeded_features(int n, int d, std::uint64_t seed,
                                const std::string& name) {
  Stream s(seed, 0xfeedULL, name);
  return s.matrix(n, d, 1.0);
}

}  // namespace propgraph

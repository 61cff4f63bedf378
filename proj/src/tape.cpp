#include "leaplab/tape.hpp"

#include <cmath>

namespace leaplab {

void Tape::reset() {
  nodes_.clear();
  adjoints_.clear();
  ran_backward_ = false;
}

Tensor Tape::watch(const Tensor& t) {
  Node n;
  n.op = Op::kLeaf;
  n.shape = t.shape;
  n.value = t.data;
  int id = push_node(std::move(n));
  Tensor out;
  out.shape = t.shape;
  out.data = t.data;
  out.tape = this;
  out.node = id;
  return out;
}

int Tape::push_node(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Tape::intern_const(const Tensor& t) {
  Node n;
  n.op = Op::kConst;
  n.shape = t.shape;
  n.value = t.data;
  return push_node(std::move(n));
}

namespace {

// dst += scale * src
void axpy(std::vector<double>& dst, const std::vector<double>& src, double scale) {
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] += scale * src[i];
}

}  // namespace

void Tape::backward(const Tensor& loss) {
  if (!loss.recorded() || loss.tape != this) {
    throw ValueError("backward: loss is not recorded on this tape");
  }
  if (loss.size() != 1) {
    throw ValueError("backward: loss must be scalar, got shape " + shape_str(loss.shape));
  }
  adjoints_.assign(nodes_.size(), {});
  adjoints_[static_cast<std::size_t>(loss.node)] = {1.0};
  ran_backward_ = true;

  auto adj = [&](int id) -> std::vector<double>& {
    auto& g = adjoints_[static_cast<std::size_t>(id)];
    if (g.empty()) g.assign(nodes_[static_cast<std::size_t>(id)].value.size(), 0.0);
    return g;
  };

  for (int id = loss.node; id >= 0; --id) {
    const auto& g = adjoints_[static_cast<std::size_t>(id)];
    if (g.empty()) continue;  // nothing reached this node
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.op) {
      case Op::kLeaf:
      case Op::kConst:
        break;
      case Op::kAdd:
        axpy(adj(n.a), g, 1.0);
        axpy(adj(n.b), g, 1.0);
        break;
      case Op::kSub:
        axpy(adj(n.a), g, 1.0);
        axpy(adj(n.b), g, -1.0);
        break;
      case Op::kMul: {
        const auto& av = nodes_[static_cast<std::size_t>(n.a)].value;
        const auto& bv = nodes_[static_cast<std::size_t>(n.b)].value;
        auto& da = adj(n.a);
        auto& db = adj(n.b);
        for (std::size_t i = 0; i < g.size(); ++i) {
          da[i] += g[i] * bv[i];
          db[i] += g[i] * av[i];
        }
        break;
      }
      case Op::kScalarMul:
        axpy(adj(n.a), g, n.scalar);
        break;
      case Op::kScalarAdd:
        axpy(adj(n.a), g, 1.0);
        break;
      case Op::kMatMul: {
        const Node& na = nodes_[static_cast<std::size_t>(n.a)];
        const Node& nb = nodes_[static_cast<std::size_t>(n.b)];
        auto& da = adj(n.a);
        auto& db = adj(n.b);
        const auto& av = na.value;
        const auto& bv = nb.value;
        if (na.shape.size() == 1 && nb.shape.size() == 2) {
          // [k] x [k,n] -> [n]
          const int64_t k = na.shape[0], cols = nb.shape[1];
          for (int64_t r = 0; r < k; ++r) {
            double acc = 0.0;
            for (int64_t c = 0; c < cols; ++c) {
              acc += bv[static_cast<std::size_t>(r * cols + c)] * g[static_cast<std::size_t>(c)];
              db[static_cast<std::size_t>(r * cols + c)] +=
                  av[static_cast<std::size_t>(r)] * g[static_cast<std::size_t>(c)];
            }
            da[static_cast<std::size_t>(r)] += acc;
          }
        } else if (na.shape.size() == 2 && nb.shape.size() == 1) {
          // [m,k] x [k] -> [m]
          const int64_t m = na.shape[0], k = na.shape[1];
          for (int64_t r = 0; r < m; ++r) {
            for (int64_t c = 0; c < k; ++c) {
              da[static_cast<std::size_t>(r * k + c)] +=
                  g[static_cast<std::size_t>(r)] * bv[static_cast<std::size_t>(c)];
              db[static_cast<std::size_t>(c)] +=
                  av[static_cast<std::size_t>(r * k + c)] * g[static_cast<std::size_t>(r)];
            }
          }
        } else {
          // [m,k] x [k,n] -> [m,n]
          const int64_t m = na.shape[0], k = na.shape[1], cols = nb.shape[1];
          for (int64_t r = 0; r < m; ++r) {
            for (int64_t c = 0; c < cols; ++c) {
              const double gv = g[static_cast<std::size_t>(r * cols + c)];
              for (int64_t p = 0; p < k; ++p) {
                da[static_cast<std::size_t>(r * k + p)] +=
                    gv * bv[static_cast<std::size_t>(p * cols + c)];
                db[static_cast<std::size_t>(p * cols + c)] +=
                    av[static_cast<std::size_t>(r * k + p)] * gv;
              }
            }
          }
        }
        break;
      }
      case Op::kTanh: {
        auto& da = adj(n.a);
        for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * (1.0 - n.value[i] * n.value[i]);
        break;
      }
      case Op::kRelu: {
        const auto& av = nodes_[static_cast<std::size_t>(n.a)].value;
        auto& da = adj(n.a);
        for (std::size_t i = 0; i < g.size(); ++i) da[i] += av[i] > 0.0 ? g[i] : 0.0;
        break;
      }
      case Op::kExp: {
        auto& da = adj(n.a);
        for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * n.value[i];
        break;
      }
      case Op::kSigmoid: {
        auto& da = adj(n.a);
        for (std::size_t i = 0; i < g.size(); ++i)
          da[i] += g[i] * n.value[i] * (1.0 - n.value[i]);
        break;
      }
      case Op::kMeanAll: {
        auto& da = adj(n.a);
        const double s = g[0] / static_cast<double>(da.size());
        for (auto& v : da) v += s;
        break;
      }
      case Op::kMeanAxis: {
        const Node& na = nodes_[static_cast<std::size_t>(n.a)];
        auto& da = adj(n.a);
        const int64_t m = na.shape[0], c = na.shape[1];
        if (n.axis == 0) {
          for (int64_t r = 0; r < m; ++r)
            for (int64_t cc = 0; cc < c; ++cc)
              da[static_cast<std::size_t>(r * c + cc)] +=
                  g[static_cast<std::size_t>(cc)] / static_cast<double>(m);
        } else {
          for (int64_t r = 0; r < m; ++r)
            for (int64_t cc = 0; cc < c; ++cc)
              da[static_cast<std::size_t>(r * c + cc)] +=
                  g[static_cast<std::size_t>(r)] / static_cast<double>(c);
        }
        break;
      }
      case Op::kSumAll: {
        auto& da = adj(n.a);
        for (auto& v : da) v += g[0];
        break;
      }
      case Op::kProdAll: {
        // d prod / d x_i = prefix_i * suffix_i (division-free, stable at zeros)
        const auto& av = nodes_[static_cast<std::size_t>(n.a)].value;
        auto& da = adj(n.a);
        const std::size_t len = av.size();
        std::vector<double> suffix(len + 1, 1.0);
        for (std::size_t i = len; i-- > 0;) suffix[i] = suffix[i + 1] * av[i];
        double prefix = 1.0;
        for (std::size_t i = 0; i < len; ++i) {
          da[i] += g[0] * prefix * suffix[i + 1];
          prefix *= av[i];
        }
        break;
      }
      case Op::kAbs: {
        const auto& av = nodes_[static_cast<std::size_t>(n.a)].value;
        auto& da = adj(n.a);
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (av[i] > 0.0)
            da[i] += g[i];
          else if (av[i] < 0.0)
            da[i] -= g[i];
        }
        break;
      }
      case Op::kMaxScalar: {
        const auto& av = nodes_[static_cast<std::size_t>(n.a)].value;
        auto& da = adj(n.a);
        for (std::size_t i = 0; i < g.size(); ++i)
          if (av[i] > n.scalar) da[i] += g[i];
        break;
      }
      case Op::kMinScalar: {
        const auto& av = nodes_[static_cast<std::size_t>(n.a)].value;
        auto& da = adj(n.a);
        for (std::size_t i = 0; i < g.size(); ++i)
          if (av[i] < n.scalar) da[i] += g[i];
        break;
      }
      case Op::kSquare: {
        const auto& av = nodes_[static_cast<std::size_t>(n.a)].value;
        auto& da = adj(n.a);
        for (std::size_t i = 0; i < g.size(); ++i) da[i] += 2.0 * av[i] * g[i];
        break;
      }
      case Op::kConcat: {
        std::vector<int> parents;
        parents.push_back(n.a);
        for (int p : n.extra_parents) parents.push_back(p);
        if (n.axis == 0 || n.shape.size() == 1) {
          std::size_t off = 0;
          for (int p : parents) {
            auto& dp = adj(p);
            for (std::size_t i = 0; i < dp.size(); ++i) dp[i] += g[off + i];
            off += dp.size();
          }
        } else {
          // 2-d, axis == 1: column blocks
          const int64_t rows = n.shape[0], total_c = n.shape[1];
          int64_t coff = 0;
          for (int p : parents) {
            const Node& np = nodes_[static_cast<std::size_t>(p)];
            const int64_t pc = np.shape[1];
            auto& dp = adj(p);
            for (int64_t r = 0; r < rows; ++r)
              for (int64_t c = 0; c < pc; ++c)
                dp[static_cast<std::size_t>(r * pc + c)] +=
                    g[static_cast<std::size_t>(r * total_c + coff + c)];
            coff += pc;
          }
        }
        break;
      }
      case Op::kBlend:
        axpy(adj(n.a), g, n.scalar);
        break;
      case Op::kStraightThrough:
        axpy(adj(n.a), g, 1.0);
        break;
    }
  }
}

std::vector<double> Tape::grad_of(const Tensor& t) const {
  if (!ran_backward_) throw ValueError("grad_of: backward has not run on this tape");
  if (!t.recorded() || t.tape != this) {
    throw ValueError("grad_of: tensor is not recorded on this tape");
  }
  const auto& g = adjoints_[static_cast<std::size_t>(t.node)];
  if (g.empty()) return std::vector<double>(t.data.size(), 0.0);
  return g;
}

void Tape::write_grads(std::vector<Tensor*> leaves) const {
  for (Tensor* t : leaves) t->grad = grad_of(*t);
}

}  // namespace leaplab

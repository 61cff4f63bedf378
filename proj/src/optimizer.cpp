#include "leaplab/optimizer.hpp"

#include <cmath>

namespace leaplab {

GradMap GradMap::zeros_like(const std::vector<Tensor*>& params) {
  GradMap gm;
  gm.g.reserve(params.size());
  for (const Tensor* p : params) gm.g.emplace_back(p->data.size(), 0.0);
  return gm;
}

void GradMap::accumulate(const std::vector<std::vector<double>>& other, double scale) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g[i].size(); ++j) g[i][j] += scale * other[i][j];
}

void GradMap::scale(double s) {
  for (auto& vec : g)
    for (auto& x : vec) x *= s;
}

double GradMap::l2_norm() const {
  double acc = 0.0;
  for (const auto& vec : g)
    for (double x : vec) acc += x * x;
  return std::sqrt(acc);
}

bool GradMap::all_finite() const {
  for (const auto& vec : g)
    for (double x : vec)
      if (!std::isfinite(x)) return false;
  return true;
}

double GradMap::max_abs_diff(const GradMap& other) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g[i].size(); ++j)
      worst = std::max(worst, std::fabs(g[i][j] - other.g[i][j]));
  return worst;
}

double GradMap::max_rel_diff(const GradMap& other, double floor) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g[i].size(); ++j) {
      const double a = g[i][j], b = other.g[i][j];
      const double denom = std::max({std::fabs(a), std::fabs(b), floor});
      worst = std::max(worst, std::fabs(a - b) / denom);
    }
  return worst;
}

AdamWState AdamWState::init(const std::vector<Tensor*>& params) {
  AdamWState st;
  st.m.reserve(params.size());
  st.v.reserve(params.size());
  for (const Tensor* p : params) {
    st.m.emplace_back(p->data.size(), 0.0);
    st.v.emplace_back(p->data.size(), 0.0);
  }
  return st;
}

void optimizer_step(const std::vector<Tensor*>& params, const GradMap& grads, AdamWState& state,
                    const AdamWConfig& cfg) {
  if (params.size() != grads.g.size() || params.size() != state.m.size()) {
    throw ValueError("optimizer_step: parameter/gradient/state size mismatch");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i]->data;
    const auto& gr = grads.g[i];
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * gr[j];
      v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * gr[j] * gr[j];
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      p[j] -= cfg.lr * (m_hat / (std::sqrt(v_hat) + cfg.eps));
      p[j] -= cfg.lr * cfg.weight_decay * p[j];
    }
  }
}

void ema_update(std::vector<Tensor>& ema, const std::vector<Tensor*>& params, double decay) {
  if (ema.size() != params.size()) throw ValueError("ema_update: size mismatch");
  for (std::size_t i = 0; i < ema.size(); ++i) {
    if (ema[i].shape != params[i]->shape)
      throw ShapeError("ema_update", ema[i].shape, params[i]->shape);
    for (std::size_t j = 0; j < ema[i].data.size(); ++j) {
      ema[i].data[j] = decay * ema[i].data[j] + (1.0 - decay) * params[i]->data[j];
    }
  }
}

}  // namespace leaplab

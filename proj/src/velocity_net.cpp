#include "leaplab/velocity_net.hpp"

#include <cmath>

#include "leaplab/ops.hpp"

namespace leaplab {

Tensor guided_velocity(const VelocityModel& model, const Tensor& x, double t, int cond,
                       double scale) {
  if (scale < 0.0) throw ValueError("guidance scale must be >= 0");
  if (scale == 1.0) return model.velocity(x, t, cond);
  const Tensor v_uncond = model.velocity(x, t, model.null_condition());
  if (scale == 0.0) return v_uncond;
  const Tensor v_cond = model.velocity(x, t, cond);
  return add(v_uncond, smul(sub(v_cond, v_uncond), scale));
}

VelocityNet::VelocityNet(NetSpec spec, Rng& init_rng) : spec_(std::move(spec)) {
  std::vector<int64_t> dims;
  dims.push_back(spec_.input_dim());
  for (int64_t h : spec_.hidden) dims.push_back(h);
  dims.push_back(spec_.latent_dim);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int64_t fan_in = dims[l], fan_out = dims[l + 1];
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::vector<double> w(static_cast<std::size_t>(fan_in * fan_out));
    for (auto& v : w) v = scale * init_rng.normal();
    params_.emplace_back(Shape{fan_in, fan_out}, std::move(w));
    params_.push_back(Tensor::zeros({fan_out}));
  }
}

VelocityNet::VelocityNet(NetSpec spec, std::vector<Tensor> params)
    : spec_(std::move(spec)), params_(std::move(params)) {
  std::vector<int64_t> dims;
  dims.push_back(spec_.input_dim());
  for (int64_t h : spec_.hidden) dims.push_back(h);
  dims.push_back(spec_.latent_dim);
  if (params_.size() != 2 * (dims.size() - 1)) {
    throw ValueError("velocity net: parameter list does not match layer layout");
  }
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (params_[2 * l].shape != Shape{dims[l], dims[l + 1]} ||
        params_[2 * l + 1].shape != Shape{dims[l + 1]}) {
      throw ShapeError("velocity net", params_[2 * l].shape, Shape{dims[l], dims[l + 1]});
    }
  }
}

std::vector<double> VelocityNet::time_features(double t) const {
  std::vector<double> f;
  f.reserve(1 + 2 * static_cast<std::size_t>(spec_.time_frequencies));
  f.push_back(t);
  double omega = 3.14159265358979323846;
  for (int i = 0; i < spec_.time_frequencies; ++i) {
    f.push_back(std::sin(omega * t));
    f.push_back(std::cos(omega * t));
    omega *= 2.0;
  }
  return f;
}

Tensor VelocityNet::velocity(const Tensor& x, double t, int cond) const {
  if (x.shape != Shape{spec_.latent_dim}) {
    throw ShapeError("velocity", x.shape, Shape{spec_.latent_dim});
  }
  if (cond < 0 || cond > spec_.cond_count) {
    throw ValueError("unknown condition label " + std::to_string(cond));
  }
  std::vector<double> onehot(static_cast<std::size_t>(spec_.cond_count) + 1, 0.0);
  onehot[static_cast<std::size_t>(cond)] = 1.0;

  const Tensor feats({static_cast<int64_t>(1 + 2 * spec_.time_frequencies)}, time_features(t));
  const Tensor cvec({spec_.cond_count + 1}, std::move(onehot));

  // Recorded evaluations read the tape handles; value-only evaluations read
  // the live parameters so in-place perturbation (finite differences) works
  // while a tape is bound.
  const bool recorded = bound_tape_ != nullptr && bound_tape_->recording();
  const std::vector<Tensor>& p = recorded ? bound_ : params_;
  Tensor h = concat({x, feats, cvec}, 0);
  const std::size_t layers = p.size() / 2;
  for (std::size_t l = 0; l < layers; ++l) {
    h = add(matmul(h, p[2 * l]), p[2 * l + 1]);
    if (l + 1 < layers) h = leaplab::tanh(h);
  }
  return h;
}

void VelocityNet::bind(Tape& tape) {
  bound_.clear();
  bound_.reserve(params_.size());
  for (const Tensor& p : params_) bound_.push_back(tape.watch(p));
  bound_tape_ = &tape;
}

void VelocityNet::unbind() {
  bound_.clear();
  bound_tape_ = nullptr;
}

std::vector<Tensor*> VelocityNet::param_ptrs() {
  std::vector<Tensor*> out;
  out.reserve(params_.size());
  for (Tensor& p : params_) out.push_back(&p);
  return out;
}

int64_t VelocityNet::param_count() {
  int64_t n = 0;
  for (const Tensor& p : params_) n += p.size();
  return n;
}

std::vector<std::vector<double>> VelocityNet::grads() const {
  if (bound_tape_ == nullptr) throw ValueError("velocity net: grads() requires a bound tape");
  std::vector<std::vector<double>> out;
  out.reserve(bound_.size());
  for (const Tensor& b : bound_) out.push_back(bound_tape_->grad_of(b));
  return out;
}

}  // namespace leaplab

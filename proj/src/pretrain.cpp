#include "leaplab/pretrain.hpp"

#include "leaplab/ops.hpp"

namespace leaplab {

void DataSpec::validate() const {
  if (latent_dim < 1) throw ValueError("data.latent_dim must be >= 1");
  if (cond_count < 1) throw ValueError("data.conditions must be >= 1");
  if (mode_centers.size() != static_cast<std::size_t>(cond_count)) {
    throw ValueError("data.mode_centers must list one center per condition");
  }
  for (const auto& c : mode_centers) {
    if (c.size() != static_cast<std::size_t>(latent_dim)) {
      throw ValueError("data.mode_centers entries must have latent_dim coordinates");
    }
  }
  if (mode_std <= 0.0) throw ValueError("data.mode_std must be positive");
}

std::pair<std::vector<double>, int> sample_data(const DataSpec& data, Rng& rng) {
  const int cond = static_cast<int>(rng.integer(0, data.cond_count - 1));
  std::vector<double> x = data.mode_centers[static_cast<std::size_t>(cond)];
  for (auto& v : x) v += data.mode_std * rng.normal();
  return {std::move(x), cond};
}

Tensor fm_pretrain_loss(const VelocityNet& net,
                        const std::vector<std::pair<std::vector<double>, int>>& batch,
                        const Scheduler& sched, Rng& rng, double cfg_dropout) {
  if (batch.empty()) throw ValueError("fm_pretrain_loss: batch must be nonempty");
  const int64_t dim = net.dim();
  Tensor total = Tensor::scalar(0.0);
  for (const auto& [x0, cond] : batch) {
    const double t = rng.uniform();
    std::vector<double> noise(static_cast<std::size_t>(dim));
    for (auto& v : noise) v = rng.normal();
    const Tensor x1({dim}, noise);
    const Tensor x0t({dim}, x0);
    const Tensor xt = noise_interpolate(x0t, x1, t, sched);

    const SchedulerEval e = sched.eval(t);
    Tensor target;
    if (sched.kind() == Scheduler::Kind::kRectified) {
      target = sub(x1, x0t);
    } else {
      target = add(smul(x0t, e.dalpha), smul(x1, e.dbeta));
    }

    const int used_cond = rng.bernoulli(cfg_dropout) ? net.null_condition() : cond;
    const Tensor pred = net.velocity(xt, t, used_cond);
    total = add(total, mean_all(square(sub(pred, target))));
  }
  return smul(total, 1.0 / static_cast<double>(batch.size()));
}

std::vector<PretrainRecord> pretrain_run(VelocityNet& net, const DataSpec& data,
                                         const PretrainSpec& spec, const Scheduler& sched) {
  data.validate();
  Rng rng(spec.seed);
  AdamWConfig opt_cfg;
  opt_cfg.lr = spec.lr;
  opt_cfg.weight_decay = 0.0;
  auto params = net.param_ptrs();
  AdamWState opt_state = AdamWState::init(params);

  std::vector<PretrainRecord> records;
  records.reserve(static_cast<std::size_t>(spec.iterations));
  for (int64_t iter = 0; iter < spec.iterations; ++iter) {
    std::vector<std::pair<std::vector<double>, int>> batch;
    batch.reserve(static_cast<std::size_t>(spec.batch));
    for (int64_t b = 0; b < spec.batch; ++b) batch.push_back(sample_data(data, rng));

    Tape tape;
    net.bind(tape);
    const Tensor loss = fm_pretrain_loss(net, batch, sched, rng, spec.cfg_dropout);
    tape.backward(loss);
    GradMap grads;
    grads.g = net.grads();
    net.unbind();

    optimizer_step(params, grads, opt_state, opt_cfg);
    records.push_back({iter, loss.item()});
  }
  return records;
}

}  // namespace leaplab

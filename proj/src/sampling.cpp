#include "leaplab/sampling.hpp"

#include <cmath>

#include "leaplab/ops.hpp"

namespace leaplab {

namespace {

// Restores a tape's recording state on scope exit.
class RecordingGuard {
 public:
  explicit RecordingGuard(Tape* tape) : tape_(tape) {
    if (tape_ != nullptr) saved_ = tape_->recording();
  }
  ~RecordingGuard() {
    if (tape_ != nullptr) tape_->set_recording(saved_);
  }

 private:
  Tape* tape_;
  bool saved_ = false;
};

}  // namespace

Tensor euler_step(const Tensor& x, const Tensor& v, double t_from, double t_to) {
  return sub(x, smul(v, t_from - t_to));
}

Rollout sample_trajectory(const VelocityModel& model, int cond, int steps, double guidance,
                          Rng& rng, const std::vector<uint8_t>& record_flags, Tape* tape) {
  if (steps < 1) throw ValueError("sample_trajectory: steps must be >= 1");
  if (!record_flags.empty() && record_flags.size() != static_cast<std::size_t>(steps) + 1) {
    throw ValueError("sample_trajectory: record_flags must have length steps+1");
  }

  Rollout out;
  Trajectory& traj = out.traj;
  traj.steps = steps;
  traj.condition = cond;
  traj.seed = rng.seed();
  traj.timesteps.resize(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    traj.timesteps[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / static_cast<double>(steps);
  }
  traj.latents.resize(static_cast<std::size_t>(steps) + 1);
  traj.velocities.resize(static_cast<std::size_t>(steps));

  std::vector<double> noise(static_cast<std::size_t>(model.dim()));
  for (auto& v : noise) v = rng.normal();
  traj.latents[static_cast<std::size_t>(steps)] = noise;

  RecordingGuard guard(tape);
  Tensor x({model.dim()}, std::move(noise));
  for (int i = steps; i >= 1; --i) {
    const bool record =
        !record_flags.empty() && record_flags[static_cast<std::size_t>(i)] != 0;
    if (tape != nullptr) tape->set_recording(record);
    const Tensor v = guided_velocity(model, x, traj.time_at(i), cond, guidance);
    Tensor next = euler_step(x, v, traj.time_at(i), traj.time_at(i - 1));
    traj.velocities[static_cast<std::size_t>(i - 1)] = v.data;
    traj.latents[static_cast<std::size_t>(i - 1)] = next.data;
    if (record) out.recorded_velocity.emplace(i, v);
    // The rollout itself continues from detached values; recorded tensors
    // are handed back separately.
    x = next.detached();
  }
  return out;
}

Trajectory sample_plain(const VelocityModel& model, int cond, int steps, double guidance,
                        Rng& rng) {
  Tape* bound = model.bound_tape();
  RecordingGuard guard(bound);
  if (bound != nullptr) bound->set_recording(false);
  return sample_trajectory(model, cond, steps, guidance, rng).traj;
}

Tensor leap_predict(const Tensor& x_k, double k, double j, const Tensor& v_k,
                    const Scheduler& sched) {
  if (!(j >= 0.0 && j <= k && k <= 1.0)) {
    throw ValueError("leap_predict requires 0 <= j <= k <= 1, got k=" + std::to_string(k) +
                     " j=" + std::to_string(j));
  }
  if (x_k.shape != v_k.shape) throw ShapeError("leap_predict", x_k.shape, v_k.shape);
  if (j == k) return smul(x_k, 1.0);  // zero-length leap
  if (sched.kind() == Scheduler::Kind::kRectified) {
    return sub(x_k, smul(v_k, k - j));
  }
  const auto [x0_hat, x1_hat] = predict_endpoints(x_k, k, v_k, sched);
  const SchedulerEval ej = sched.eval(j);
  if (j == 0.0) return smul(x0_hat, 1.0);
  return add(smul(x0_hat, ej.alpha), smul(x1_hat, ej.beta));
}

std::pair<Tensor, Tensor> predict_endpoints(const Tensor& x_t, double t, const Tensor& v_t,
                                            const Scheduler& sched) {
  if (x_t.shape != v_t.shape) throw ShapeError("predict_endpoints", x_t.shape, v_t.shape);
  const SchedulerEval e = sched.eval(t);
  constexpr double kSingular = 1e-12;
  if (std::fabs(e.alpha) >= std::fabs(e.beta)) {
    // Solve x1_hat from the velocity relation, then x0_hat from the
    // interpolation identity.
    if (std::fabs(e.alpha) < kSingular) throw SingularSchedulerError(t);
    const double denom = e.dbeta - e.dalpha * (e.beta / e.alpha);
    if (std::fabs(denom) < kSingular) throw SingularSchedulerError(t);
    const Tensor x1_hat = smul(sub(v_t, smul(x_t, e.dalpha / e.alpha)), 1.0 / denom);
    const Tensor x0_hat = smul(sub(x_t, smul(x1_hat, e.beta)), 1.0 / e.alpha);
    return {x0_hat, x1_hat};
  }
  if (std::fabs(e.beta) < kSingular) throw SingularSchedulerError(t);
  const double denom = e.dalpha - e.dbeta * (e.alpha / e.beta);
  if (std::fabs(denom) < kSingular) throw SingularSchedulerError(t);
  const Tensor x0_hat = smul(sub(v_t, smul(x_t, e.dbeta / e.beta)), 1.0 / denom);
  const Tensor x1_hat = smul(sub(x_t, smul(x0_hat, e.alpha)), 1.0 / e.beta);
  return {x0_hat, x1_hat};
}

}  // namespace leaplab

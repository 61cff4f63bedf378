#include "leaplab/scheduler.hpp"

#include <cmath>

#include "leaplab/ops.hpp"

namespace leaplab {

Scheduler Scheduler::rectified() {
  Scheduler s;
  s.kind_ = Kind::kRectified;
  return s;
}

Scheduler Scheduler::generic_from_table(std::vector<double> alpha, std::vector<double> beta,
                                        std::vector<double> dalpha, std::vector<double> dbeta) {
  if (alpha.size() < 2 || alpha.size() != beta.size() || alpha.size() != dalpha.size() ||
      alpha.size() != dbeta.size()) {
    throw ValueError("scheduler tables must share one length >= 2");
  }
  Scheduler s;
  s.kind_ = Kind::kGeneric;
  s.alpha_ = std::move(alpha);
  s.beta_ = std::move(beta);
  s.dalpha_ = std::move(dalpha);
  s.dbeta_ = std::move(dbeta);
  return s;
}

Scheduler Scheduler::tabulated(const std::function<double(double)>& alpha,
                               const std::function<double(double)>& beta,
                               const std::function<double(double)>& dalpha,
                               const std::function<double(double)>& dbeta, int samples) {
  std::vector<double> a, b, da, db;
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
    a.push_back(alpha(t));
    b.push_back(beta(t));
    da.push_back(dalpha(t));
    db.push_back(dbeta(t));
  }
  return generic_from_table(std::move(a), std::move(b), std::move(da), std::move(db));
}

namespace {

double lerp_table(const std::vector<double>& tb, double t) {
  const double pos = t * static_cast<double>(tb.size() - 1);
  const auto i0 = static_cast<std::size_t>(pos);
  if (i0 + 1 >= tb.size()) return tb.back();
  const double frac = pos - static_cast<double>(i0);
  return tb[i0] + frac * (tb[i0 + 1] - tb[i0]);
}

}  // namespace

SchedulerEval Scheduler::eval(double t) const {
  if (t < 0.0 || t > 1.0 || !std::isfinite(t)) {
    throw ValueError("scheduler eval: t must lie in [0,1], got " + std::to_string(t));
  }
  if (kind_ == Kind::kRectified) {
    return {1.0 - t, t, -1.0, 1.0};
  }
  return {lerp_table(alpha_, t), lerp_table(beta_, t), lerp_table(dalpha_, t),
          lerp_table(dbeta_, t)};
}

Tensor noise_interpolate(const Tensor& x0, const Tensor& x1, double t, const Scheduler& s) {
  if (x0.shape != x1.shape) throw ShapeError("noise_interpolate", x0.shape, x1.shape);
  const SchedulerEval e = s.eval(t);
  if (t == 0.0) return x0.recorded() ? smul(x0, 1.0) : x0.detached();
  if (t == 1.0) return x1.recorded() ? smul(x1, 1.0) : x1.detached();
  return add(smul(x0, e.alpha), smul(x1, e.beta));
}

}  // namespace leaplab

#include "dephasim/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dephasim/errors.hpp"

namespace dephasim {

void validate(const PolarizationState& state) {
  if (!state.p.allFinite()) throw InvalidParameter("polarization has non-finite components");
  if (state.p.norm() > 1.0 + 1e-9) {
    throw InvalidParameter("|P| = " + std::to_string(state.p.norm()) + " exceeds 1");
  }
}

void validate(const EvolutionParams& params) {
  if (!params.v.allFinite()) throw InvalidParameter("V has non-finite components");
  if (!std::isfinite(params.damping) || params.damping < 0.0) {
    throw InvalidParameter("damping must be finite and >= 0");
  }
}

Vec3 derivative(const PolarizationState& state, const EvolutionParams& params) {
  const Vec3& p = state.p;
  return params.v.cross(p) - params.damping * Vec3{p.x(), p.y(), 0.0};
}

EvolutionParams effective_params(const EvolutionParams& intrinsic, const InfluenceResult& infl) {
  EvolutionParams out = intrinsic;
  out.v.z() += infl.induced_vz;
  out.damping += infl.damping;
  return out;
}

double max_step(const EvolutionParams& params) {
  const double scale =
      std::max({params.v.norm(), params.damping, std::numeric_limits<double>::min()});
  return 0.01 / scale;
}

Trajectory evolve(const PolarizationState& p0, const EvolutionParams& params, double t_end,
                  double step) {
  validate(p0);
  validate(params);
  if (!std::isfinite(t_end) || t_end < 0.0) throw InvalidParameter("t_end must be >= 0");
  const double cap = max_step(params);
  if (!std::isfinite(step) || step <= 0.0 || step > cap * (1.0 + 1e-12)) {
    throw InvalidParameter("step " + std::to_string(step) + " outside (0, " +
                           std::to_string(cap) + "]");
  }

  const auto n_steps =
      t_end == 0.0 ? std::size_t{0} : static_cast<std::size_t>(std::ceil(t_end / step - 1e-9));
  const double h = n_steps == 0 ? 0.0 : t_end / static_cast<double>(n_steps);

  Trajectory traj;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(p0);

  PolarizationState y = p0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const Vec3 k1 = derivative(y, params);
    const Vec3 k2 = derivative({y.p + 0.5 * h * k1}, params);
    const Vec3 k3 = derivative({y.p + 0.5 * h * k2}, params);
    const Vec3 k4 = derivative({y.p + h * k3}, params);
    y.p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.times.push_back(k == n_steps ? t_end : static_cast<double>(k) * h);
    traj.states.push_back(y);
  }
  return traj;
}

double zeno_timescale(double v_tr, double d) {
  if (!std::isfinite(v_tr) || v_tr <= 0.0) {
    throw InvalidParameter("zeno timescale needs a nonzero tunneling energy");
  }
  if (!std::isfinite(d) || d < 0.0) throw InvalidParameter("damping must be >= 0");
  return d / (v_tr * v_tr);
}

RegimeReport classify_regime(double v_tr, double d, double flux) {
  for (double x : {v_tr, d, flux}) {
    if (!std::isfinite(x) || x < 0.0) throw InvalidParameter("regime inputs must be >= 0");
  }
  RegimeReport r;
  if (v_tr == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.damping_ratio = d / v_tr;
  r.probe_ratio = flux / v_tr;
  r.strong_damping = r.damping_ratio > kStrongDampingRatio;
  r.frozen_dot = r.probe_ratio >= kMuchGreaterRatio;
  r.weakened_frozen_dot = r.probe_ratio * r.probe_ratio >= kMuchGreaterRatio;
  r.counting_valid = r.strong_damping ? r.weakened_frozen_dot : r.frozen_dot;
  return r;
}

}  // namespace dephasim

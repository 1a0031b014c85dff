#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "dephasim/influence.hpp"

namespace dephasim {

using Vec3 = Eigen::Vector3d;

// Polarization (Bloch) vector of the measured two-state system,
// rho = (1 + P.sigma) / 2, with P_z = Prob(L) - Prob(R).
struct PolarizationState {
  Vec3 p = Vec3::UnitZ();

  double transverse_norm() const { return std::hypot(p.x(), p.y()); }
};

// |P| <= 1 + 1e-9 and finite.
void validate(const PolarizationState& state);

// Real energies V = (V_x, V_y, V_z) and transverse damping rate D.
// V_x, V_y tunnel between the dots; V_z is their level asymmetry.
struct EvolutionParams {
  Vec3 v = Vec3::Zero();
  double damping = 0.0;

  double tunneling() const { return std::hypot(v.x(), v.y()); }
};

void validate(const EvolutionParams& params);

struct Trajectory {
  std::vector<double> times;
  std::vector<PolarizationState> states;

  std::size_t size() const { return times.size(); }
  const PolarizationState& back() const { return states.back(); }
};

/// dP/dt = V x P - D (P_x, P_y, 0). The damping never touches P_z because the
/// detector does not move the electron between dots.
Vec3 derivative(const PolarizationState& state, const EvolutionParams& params);

/// Adds the detector back-action: V_z gains the induced shift, D gains the damping.
EvolutionParams effective_params(const EvolutionParams& intrinsic, const InfluenceResult& infl);

// Largest step accepted by evolve: 0.01 / max(|V|, D).
double max_step(const EvolutionParams& params);

/// Fixed-step classical RK4 integration from t = 0 to t_end. The requested
/// step is shrunk so that an integer number of equal steps lands on t_end.
/// Throws InvalidParameter when step exceeds max_step(params).
Trajectory evolve(const PolarizationState& p0, const EvolutionParams& params, double t_end,
                  double step);

// Slowed relaxation time D / V_tr^2 of a strongly watched system.
double zeno_timescale(double v_tr, double d);

struct RegimeReport {
  bool degenerate = false;  // v_tr == 0: no internal dynamics to compare against
  double damping_ratio = 0.0;  // d / v_tr
  double probe_ratio = 0.0;    // flux / v_tr
  bool strong_damping = false;
  bool frozen_dot = false;          // flux / v_tr >= threshold
  bool weakened_frozen_dot = false;  // (flux / v_tr)^2 >= threshold
  // Frozen-dot condition that applies in this regime.
  bool counting_valid = false;
};

inline constexpr double kMuchGreaterRatio = 10.0;
inline constexpr double kStrongDampingRatio = 1.0;

RegimeReport classify_regime(double v_tr, double d, double flux);

}  // namespace dephasim

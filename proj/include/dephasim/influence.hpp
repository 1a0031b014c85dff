#pragma once

#include <span>
#include <vector>

#include "dephasim/smatrix.hpp"

namespace dephasim {

// The detector: barrier seen when the measured electron sits on the left dot
// (barrier_l) or the right dot (barrier_r), probed at rate `flux` from one side.
// Natural units throughout (hbar = e = 1), so flux, damping and energies are
// all rates.
struct DetectorSetup {
  BarrierParams barrier_l;
  BarrierParams barrier_r;
  double flux = 0.0;
  Direction direction = Direction::Forward;
};

// lambda = induced_vz + i * damping.
struct InfluenceResult {
  Complex lambda{0.0, 0.0};
  double damping = 0.0;
  double induced_vz = 0.0;
};

// Forward-minus-Backward differences of damping and induced energy.
struct DirectionAsymmetry {
  double delta_damping = 0.0;
  double delta_vz = 0.0;
};

struct FringePrediction {
  double phase_shift = 0.0;
  double contrast_factor = 1.0;
};

void validate(const DetectorSetup& setup);

// Probing rate of a biased point contact, e * v_d / (pi * hbar).
double landauer_flux(double v_d, double charge = 1.0, double hbar = 1.0);

/// Influence functional by direct matrix algebra:
///   i * flux * (1 - (S_L S_R^dagger)_{dd})
/// with d the channel of the incoming detector electron. This is the reference
/// every closed form below is checked against.
Complex lambda_oracle(const DetectorSetup& setup);

/// flux * Re{1 - e^{i dphi} [cos dtheta + sin th_L sin th_R (e^{i s deta} - 1)]}
/// with s = -1 for Forward and s = +1 for Backward (the sign that reproduces
/// lambda_oracle channel by channel). Never negative.
double damping_closed_form(const DetectorSetup& setup);

// Even barriers (eta_L = eta_R): flux * (1 - cos dphi cos dtheta).
double damping_symmetric(double delta_phi, double delta_theta, double flux);

// Leading order of damping_symmetric in both angles.
double damping_small_angle(double delta_phi, double delta_theta, double flux);

/// flux * Im{e^{i dphi} [cos dtheta + sin th_L sin th_R (e^{i s deta} - 1)]},
/// i.e. Re(lambda). Nonzero at equal transmissions as long as dphi != 0.
double induced_energy_shift(const DetectorSetup& setup);

/// Closed-form Forward minus Backward difference of damping and induced energy:
///   delta_damping = -2 flux sin dphi sin th_L sin th_R sin deta
///   delta_vz      = -2 flux cos dphi sin th_L sin th_R sin deta
/// Both odd in deta and linear for small deta. `setup.direction` is ignored.
DirectionAsymmetry direction_asymmetry(const DetectorSetup& setup);

/// Interference-fringe consequences for a measured electron spending
/// `dwell_time` near the detector: the fringe moves by V_z^ind * dwell_time and
/// its contrast is reduced by exp(-D * dwell_time).
FringePrediction fringe_prediction(const DetectorSetup& setup, double dwell_time);

// Closed forms packaged as an InfluenceResult.
InfluenceResult compute_influence(const DetectorSetup& setup);

// Batched evaluation over many setups, parallelised over entries.
std::vector<InfluenceResult> compute_influence_batch(std::span<const DetectorSetup> setups);

namespace serial {
std::vector<InfluenceResult> compute_influence_batch(std::span<const DetectorSetup> setups);
}  // namespace serial

}  // namespace dephasim

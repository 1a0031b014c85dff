#include "dephasim/influence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dephasim/errors.hpp"

namespace dephasim {

namespace {

void require_flux(double flux) {
  if (!std::isfinite(flux) || flux < 0.0) {
    throw InvalidParameter("flux = " + std::to_string(flux) + " must be finite and >= 0");
  }
}

// Sign multiplying delta_eta in the diagonal element of S_L S_R^dagger.
// (S_L S_R^dagger)_{00} carries e^{-i deta}, (S_L S_R^dagger)_{11} carries e^{+i deta}.
double eta_sign(Direction d) { return d == Direction::Forward ? -1.0 : 1.0; }

// e^{i dphi} [cos dtheta + sin th_L sin th_R (e^{i s deta} - 1)]
Complex overlap(const DetectorSetup& setup) {
  const auto& l = setup.barrier_l;
  const auto& r = setup.barrier_r;
  const double s = eta_sign(setup.direction);
  const Complex bracket = std::cos(l.theta - r.theta) +
                          std::sin(l.theta) * std::sin(r.theta) *
                              (std::polar(1.0, s * (l.eta - r.eta)) - 1.0);
  return std::polar(1.0, l.phi - r.phi) * bracket;
}

}  // namespace

void validate(const DetectorSetup& setup) {
  validate(setup.barrier_l);
  validate(setup.barrier_r);
  require_flux(setup.flux);
}

double landauer_flux(double v_d, double charge, double hbar) {
  if (!std::isfinite(v_d) || v_d < 0.0) {
    throw InvalidParameter("detector voltage must be finite and >= 0; the current direction "
                           "is given separately");
  }
  if (!std::isfinite(charge) || charge <= 0.0) throw InvalidParameter("charge must be > 0");
  if (!std::isfinite(hbar) || hbar <= 0.0) throw InvalidParameter("hbar must be > 0");
  return charge * v_d / (std::numbers::pi * hbar);
}

Complex lambda_oracle(const DetectorSetup& setup) {
  validate(setup);
  const ScatteringMatrix m =
      build_smatrix(setup.barrier_l) * build_smatrix(setup.barrier_r).adjoint();
  const int d = channel(setup.direction);
  return Complex{0.0, setup.flux} * (1.0 - m(d, d));
}

double damping_closed_form(const DetectorSetup& setup) {
  validate(setup);
  return std::max(0.0, setup.flux * (1.0 - overlap(setup).real()));
}

double damping_symmetric(double delta_phi, double delta_theta, double flux) {
  require_flux(flux);
  return flux * (1.0 - std::cos(delta_phi) * std::cos(delta_theta));
}

double damping_small_angle(double delta_phi, double delta_theta, double flux) {
  require_flux(flux);
  return 0.5 * flux * (delta_phi * delta_phi + delta_theta * delta_theta);
}

double induced_energy_shift(const DetectorSetup& setup) {
  validate(setup);
  return setup.flux * overlap(setup).imag();
}

DirectionAsymmetry direction_asymmetry(const DetectorSetup& setup) {
  validate(setup);
  const auto& l = setup.barrier_l;
  const auto& r = setup.barrier_r;
  // Generic "this direction minus the other" law, evaluated with the Forward sign of deta.
  const double amp = 2.0 * setup.flux * std::sin(l.theta) * std::sin(r.theta) *
                     std::sin(eta_sign(Direction::Forward) * (l.eta - r.eta));
  const double dphi = l.phi - r.phi;
  return {amp * std::sin(dphi), amp * std::cos(dphi)};
}

FringePrediction fringe_prediction(const DetectorSetup& setup, double dwell_time) {
  if (!std::isfinite(dwell_time) || dwell_time < 0.0) {
    throw InvalidParameter("dwell_time must be finite and >= 0");
  }
  return {induced_energy_shift(setup) * dwell_time,
          std::exp(-damping_closed_form(setup) * dwell_time)};
}

InfluenceResult compute_influence(const DetectorSetup& setup) {
  const double damping = damping_closed_form(setup);
  const double vz = induced_energy_shift(setup);
  return {Complex{vz, damping}, damping, vz};
}

}  // namespace dephasim

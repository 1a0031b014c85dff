#include "dephasim/smatrix.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dephasim/errors.hpp"

namespace dephasim {

namespace {

void require_angle(double value, double lo, bool lo_open, double hi, const char* name) {
  const bool below = lo_open ? !(value > lo) : !(value >= lo);
  if (!std::isfinite(value) || below || value > hi) {
    throw InvalidParameter(std::string(name) + " = " + std::to_string(value) +
                           " outside " + (lo_open ? "(" : "[") + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
}

}  // namespace

Direction reversed(Direction d) noexcept {
  return d == Direction::Forward ? Direction::Backward : Direction::Forward;
}

std::string_view to_string(Direction d) noexcept {
  return d == Direction::Forward ? "forward" : "backward";
}

std::optional<Direction> parse_direction(std::string_view text) noexcept {
  if (text == "forward" || text == "+k") return Direction::Forward;
  if (text == "backward" || text == "-k") return Direction::Backward;
  return std::nullopt;
}

void validate(const BarrierParams& params) {
  constexpr double pi = std::numbers::pi;
  require_angle(params.theta, 0.0, false, pi / 2, "theta");
  require_angle(params.phi, -pi, true, pi, "phi");
  require_angle(params.eta, -pi, true, pi, "eta");
}

ScatteringMatrix build_smatrix(const BarrierParams& params) {
  validate(params);
  const Complex i{0.0, 1.0};
  const double c = std::cos(params.theta);
  const double s = std::sin(params.theta);
  const Complex overall = std::polar(1.0, params.phi);

  ScatteringMatrix m;
  m(0, 0) = c;
  m(0, 1) = i * std::polar(1.0, -params.eta) * s;
  m(1, 0) = i * std::polar(1.0, params.eta) * s;
  m(1, 1) = c;
  return overall * m;
}

double transmission_probability(const BarrierParams& params) {
  validate(params);
  const double c = std::cos(params.theta);
  return c * c;
}

bool is_unitary(const ScatteringMatrix& m, double tol) {
  const Eigen::Matrix2cd residual = m * m.adjoint() - Eigen::Matrix2cd::Identity();
  return residual.cwiseAbs().maxCoeff() <= tol;
}

bool is_time_reversal_symmetric(const ScatteringMatrix& m, double tol) {
  return std::abs(m(0, 0) - m(1, 1)) <= tol;
}

bool is_parity_symmetric(const BarrierParams& params, double tol) {
  validate(params);
  return std::abs(params.eta) <= tol;
}

}  // namespace dephasim

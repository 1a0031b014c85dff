#pragma once

#include <complex>
#include <optional>
#include <string_view>

#include <Eigen/Core>

namespace dephasim {

using Complex = std::complex<double>;

// One barrier of the detector, described by three angles:
//   theta in [0, pi/2]  magnitude of transmission vs. reflection
//   phi   in (-pi, pi]  overall phase
//   eta   in (-pi, pi]  phase difference between the two incoming directions
struct BarrierParams {
  double theta = 0.0;
  double phi = 0.0;
  double eta = 0.0;
};

// Direction of the detector current. Forward is an incoming +k wave.
enum class Direction { Forward, Backward };

Direction reversed(Direction d) noexcept;
std::string_view to_string(Direction d) noexcept;
std::optional<Direction> parse_direction(std::string_view text) noexcept;

// Channel index of the incoming wave: 0 for +k, 1 for -k.
constexpr int channel(Direction d) noexcept { return d == Direction::Forward ? 0 : 1; }

/// Two-channel scattering matrix of a single barrier at fixed energy.
///
/// Rows and columns are indexed by wave vector: 0 <-> +k, 1 <-> -k. Column j
/// holds the outgoing amplitudes for a unit wave incoming in channel j, so for
/// a +k wave the far-field solution is
///
///     e^{ikz} + S(1,0) e^{-ikz}   on the incoming side,
///     S(0,0) e^{ikz}              on the far side,
///
/// i.e. S(0,0) is the +k transmission amplitude and S(1,0) its reflection.
/// Physical matrices are unitary and time-reversal symmetric, S(0,0) == S(1,1).
using ScatteringMatrix = Eigen::Matrix2cd;

// Throws InvalidParameter if any angle is non-finite or outside its domain.
void validate(const BarrierParams& params);

/// e^{i phi} [[cos theta, i e^{-i eta} sin theta], [i e^{i eta} sin theta, cos theta]]
ScatteringMatrix build_smatrix(const BarrierParams& params);

/// |S(0,0)|^2 = cos^2 theta. The same for both directions of the current.
double transmission_probability(const BarrierParams& params);

bool is_unitary(const ScatteringMatrix& m, double tol);
bool is_time_reversal_symmetric(const ScatteringMatrix& m, double tol);

// Even-shaped barrier: eta vanishes and both off-diagonal elements coincide.
bool is_parity_symmetric(const BarrierParams& params, double tol);

}  // namespace dephasim

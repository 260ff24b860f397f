#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "omds/errors.hpp"
#include "omds/geometry.hpp"

namespace omds {

struct ScatterPoint {
  double range = 0.0;            // r_p [m]
  double reflectivity = 0.0;     // a_p, dimensionless amplitude
  double radial_velocity = 0.0;  // v_p [m/s], positive toward the transceiver; diagnostic only
};

/// Per-scattering-point state at one slow-time instant. The channel module
/// synthesizes from ranges and reflectivities alone.
struct ScatterSnapshot {
  double time = 0.0;
  std::vector<ScatterPoint> points;
};

/// Four-blade fan: one scatterer per blade tip plus the hub, blades spaced
/// pi/2 apart in phase.
struct FanTarget {
  Vec3 center;
  double blade_length = 0.0;      // R [m]
  double angular_velocity = 0.0;  // omega_r [rad/s]
  double initial_phase = 0.0;     // first blade; blade p adds p*pi/2
  double blade_reflectivity = 1.0;
  double hub_reflectivity = 2.0;
};

inline constexpr int kFanBlades = 4;

/// Blade tips at r_p(t) = sqrt(r0^2 + R^2 + 2 r0 R cos(w t + phi_p)), hub at
/// r0 = |center - tx_pos|. Reflectivities follow the 1/r^2 law. Point order
/// is blades 0..3 then hub. Throws DegenerateGeometry when r0 <= R.
ScatterSnapshot fan_snapshot(const FanTarget& fan, const Vec3& tx_pos, double t);

/// Ellipsoid radar cross section for semi-axes (a, b, c) seen from zenith
/// angle theta and aspect angle phi:
///   sigma = pi a^2 b^2 c^2 / (a^2 Phi + b^2 Psi + c^2 cos^2 theta)^2,
///   Phi = sin^2 theta cos^2 phi, Psi = sin^2 theta sin^2 phi.
double ellipsoid_rcs(double a, double b, double c, double zenith, double aspect);

struct Primitive {
  enum class Kind { Ellipsoid, Sphere };
  std::string name;
  Kind kind = Kind::Ellipsoid;
  std::string joint_a;
  std::string joint_b;  // empty: primitive centered on joint_a
  double a = 0.0, b = 0.0, c = 0.0;  // semi-axes along local x, y, z
  double zeta = 1.0;                 // reflectivity scale
};

/// Natural cubic spline through strictly increasing knots. Evaluation is
/// exact at the knots; outside the knot span it throws TimeOutOfRange.
class CubicSpline {
 public:
  CubicSpline(std::span<const double> x, std::span<const double> y);
  double operator()(double t) const;

 private:
  std::vector<double> x_, y_, second_;
};

/// Named 3-D joint position series, all joints at one sample rate.
struct MotionTrack {
  double sample_rate = 0.0;
  std::vector<std::string> joint_names;
  std::vector<std::vector<Vec3>> joints;  // [joint][frame]

  std::size_t frame_count() const { return joints.empty() ? 0 : joints[0].size(); }
  double duration() const {
    return frame_count() < 2 ? 0.0
                             : static_cast<double>(frame_count() - 1) / sample_rate;
  }
  /// Index of a joint by name; throws UnboundJoint.
  std::size_t joint_index(const std::string& name) const;
  void validate() const;
};

/// Cubic-spline interpolation of every coordinate to target_rate. Passes
/// exactly through the original knots; duration is preserved up to one
/// output sample. Requires target_rate >= sample_rate and >= 4 samples.
MotionTrack resample_track(const MotionTrack& track, double target_rate);

/// Two-joint fixture: "pivot" fixed, "bob" at
/// pivot + length*(sin psi, -cos psi, 0), psi(t) = amplitude*sin(2 pi t/period).
MotionTrack synthetic_pendulum_track(const Vec3& pivot, double length,
                                     double amplitude, double period,
                                     double rate, double duration);

/// Primitive-shape target driven by a motion track. The standard human body
/// binds kStandardBodyPrimitives shapes; other bindings (test fixtures such
/// as the pendulum bob) are accepted as long as every joint resolves.
struct HumanTarget {
  MotionTrack track;
  std::vector<Primitive> primitives;
  Vec3 tx_position;
};

inline constexpr std::size_t kStandardBodyPrimitives = 19;

/// Validates joint bindings and radii.
void validate_human(const HumanTarget& human);

/// One scatter point per primitive: center from the bound joints at time t,
/// local z along the segment, a_p = zeta * sqrt(sigma_p) / r_p^2.
ScatterSnapshot human_snapshot(const HumanTarget& human, double t);

/// Single scatterer at r(t) = r0 + range_rate * t with reflectivity/r^2
/// amplitude; the diagnostic radial velocity is -range_rate (positive
/// toward the transceiver).
ScatterSnapshot point_target_snapshot(double r0, double range_rate, double t,
                                      double reflectivity = 1.0);

}  // namespace omds

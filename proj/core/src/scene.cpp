#include "omds/scene.hpp"

#include <algorithm>
#include <cmath>

#include "omds/constants.hpp"

namespace omds {

namespace {
// Vertical reference for primitive local frames and the pendulum fixture.
constexpr Vec3 kWorldUp{0.0, 1.0, 0.0};
constexpr Vec3 kWorldX{1.0, 0.0, 0.0};
}  // namespace

ScatterSnapshot fan_snapshot(const FanTarget& fan, const Vec3& tx_pos, double t) {
  if (fan.blade_length <= 0.0) {
    fail(ErrorCode::NonPositiveParameter, "blade_length must be positive");
  }
  const double r0 = (fan.center - tx_pos).norm();
  if (r0 <= fan.blade_length) {
    fail(ErrorCode::DegenerateGeometry, "transceiver inside the rotation disc");
  }
  ScatterSnapshot snap;
  snap.time = t;
  snap.points.reserve(kFanBlades + 1);
  const double R = fan.blade_length;
  for (int p = 0; p < kFanBlades; ++p) {
    const double ang = fan.angular_velocity * t + fan.initial_phase + p * kPi / 2.0;
    const double rp = std::sqrt(r0 * r0 + R * R + 2.0 * r0 * R * std::cos(ang));
    // v_p = -dr_p/dt, closing positive
    const double vp = r0 * R * fan.angular_velocity * std::sin(ang) / rp;
    snap.points.push_back({rp, fan.blade_reflectivity / (rp * rp), vp});
  }
  snap.points.push_back({r0, fan.hub_reflectivity / (r0 * r0), 0.0});
  return snap;
}

double ellipsoid_rcs(double a, double b, double c, double zenith, double aspect) {
  const double st = std::sin(zenith);
  const double ct = std::cos(zenith);
  const double phi_term = st * st * std::cos(aspect) * std::cos(aspect);
  const double psi_term = st * st * std::sin(aspect) * std::sin(aspect);
  const double denom = a * a * phi_term + b * b * psi_term + c * c * ct * ct;
  return kPi * a * a * b * b * c * c / (denom * denom);
}

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 4 || y.size() != n) {
    fail(ErrorCode::TooFewSamples, "cubic spline needs at least 4 samples");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) {
      fail(ErrorCode::NonPositiveParameter, "spline knots must be strictly increasing");
    }
  }
  x_.assign(x.begin(), x.end());
  y_.assign(y.begin(), y.end());
  second_.assign(n, 0.0);

  // Tridiagonal solve for interior second derivatives, natural boundaries.
  std::vector<double> cp(n, 0.0), dp(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double m = 2.0 * (h0 + h1) - h0 * cp[i - 1];
    cp[i] = h1 / m;
    dp[i] = (rhs - h0 * dp[i - 1]) / m;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    second_[i] = dp[i] - cp[i] * second_[i + 1];
  }
}

double CubicSpline::operator()(double t) const {
  const double span = x_.back() - x_.front();
  const double eps = 1e-9 * span;
  if (t < x_.front() - eps || t > x_.back() + eps) {
    fail(ErrorCode::TimeOutOfRange, "spline evaluated outside its knot span");
  }
  t = std::clamp(t, x_.front(), x_.back());
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  const std::size_t i = std::clamp<std::size_t>(
      static_cast<std::size_t>(it - x_.begin()), 1, x_.size() - 1) - 1;
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * h * h / 6.0;
}

std::size_t MotionTrack::joint_index(const std::string& name) const {
  for (std::size_t i = 0; i < joint_names.size(); ++i) {
    if (joint_names[i] == name) return i;
  }
  fail(ErrorCode::UnboundJoint, "joint not present in track: " + name);
}

void MotionTrack::validate() const {
  if (sample_rate <= 0.0) {
    fail(ErrorCode::NonPositiveParameter, "track sample_rate must be positive");
  }
  if (joint_names.size() != joints.size() || joints.empty()) {
    fail(ErrorCode::DimensionMismatch, "joint names and series count differ");
  }
  const std::size_t frames = joints[0].size();
  for (const auto& series : joints) {
    if (series.size() != frames) {
      fail(ErrorCode::DimensionMismatch, "joint series lengths differ");
    }
    for (const Vec3& p : series) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
        fail(ErrorCode::NonPositiveParameter, "non-finite joint position");
      }
    }
  }
}

MotionTrack resample_track(const MotionTrack& track, double target_rate) {
  track.validate();
  if (target_rate < track.sample_rate) {
    fail(ErrorCode::NonPositiveParameter, "target_rate must be >= track sample_rate");
  }
  const std::size_t frames = track.frame_count();
  if (frames < 4) {
    fail(ErrorCode::TooFewSamples, "resampling needs at least 4 samples per joint");
  }

  std::vector<double> knots(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    knots[k] = static_cast<double>(k) / track.sample_rate;
  }
  const double duration = knots.back();
  const std::size_t out_frames =
      static_cast<std::size_t>(std::floor(duration * target_rate + 1e-9)) + 1;

  MotionTrack out;
  out.sample_rate = target_rate;
  out.joint_names = track.joint_names;
  out.joints.assign(track.joints.size(), std::vector<Vec3>(out_frames));

  std::vector<double> coord(frames);
  for (std::size_t j = 0; j < track.joints.size(); ++j) {
    for (int axis = 0; axis < 3; ++axis) {
      for (std::size_t k = 0; k < frames; ++k) {
        const Vec3& p = track.joints[j][k];
        coord[k] = axis == 0 ? p.x : axis == 1 ? p.y : p.z;
      }
      CubicSpline spline(knots, coord);
      for (std::size_t k = 0; k < out_frames; ++k) {
        const double t = static_cast<double>(k) / target_rate;
        const double v = spline(t);
        Vec3& p = out.joints[j][k];
        (axis == 0 ? p.x : axis == 1 ? p.y : p.z) = v;
      }
    }
  }
  return out;
}

MotionTrack synthetic_pendulum_track(const Vec3& pivot, double length,
                                     double amplitude, double period,
                                     double rate, double duration) {
  if (length <= 0.0 || period <= 0.0 || rate <= 0.0 || duration <= 0.0 || amplitude < 0.0) {
    fail(ErrorCode::NonPositiveParameter, "pendulum parameters must be positive");
  }
  const std::size_t frames =
      static_cast<std::size_t>(std::floor(duration * rate + 1e-9)) + 1;
  MotionTrack track;
  track.sample_rate = rate;
  track.joint_names = {"pivot", "bob"};
  track.joints.assign(2, std::vector<Vec3>(frames));
  for (std::size_t k = 0; k < frames; ++k) {
    const double t = static_cast<double>(k) / rate;
    const double psi = amplitude * std::sin(2.0 * kPi * t / period);
    track.joints[0][k] = pivot;
    track.joints[1][k] = pivot + length * Vec3{std::sin(psi), -std::cos(psi), 0.0};
  }
  return track;
}

void validate_human(const HumanTarget& human) {
  human.track.validate();
  if (human.primitives.empty()) {
    fail(ErrorCode::NonPositiveParameter, "target binds no primitives");
  }
  for (const Primitive& p : human.primitives) {
    if (p.a <= 0.0 || p.b <= 0.0 || p.c <= 0.0) {
      fail(ErrorCode::NonPositiveParameter, "primitive radii must be positive: " + p.name);
    }
    if (p.kind == Primitive::Kind::Sphere && (p.a != p.b || p.b != p.c)) {
      fail(ErrorCode::NonPositiveParameter, "sphere radii must be equal: " + p.name);
    }
    human.track.joint_index(p.joint_a);
    if (!p.joint_b.empty()) human.track.joint_index(p.joint_b);
  }
}

namespace {

Vec3 track_position(const MotionTrack& track, std::size_t joint, double t) {
  const double pos = t * track.sample_rate;
  const auto last = static_cast<double>(track.frame_count() - 1);
  const double clamped = std::clamp(pos, 0.0, last);
  const std::size_t i0 = static_cast<std::size_t>(std::floor(clamped));
  const std::size_t i1 = std::min(i0 + 1, track.frame_count() - 1);
  const double frac = clamped - static_cast<double>(i0);
  const Vec3& p0 = track.joints[joint][i0];
  const Vec3& p1 = track.joints[joint][i1];
  return p0 + frac * (p1 - p0);
}

struct PrimitiveFrame {
  Vec3 center;
  Vec3 axis;  // local z
};

PrimitiveFrame primitive_frame(const HumanTarget& human, const Primitive& prim, double t) {
  const std::size_t ja = human.track.joint_index(prim.joint_a);
  const Vec3 pa = track_position(human.track, ja, t);
  if (prim.joint_b.empty()) {
    return {pa, kWorldUp};
  }
  const std::size_t jb = human.track.joint_index(prim.joint_b);
  const Vec3 pb = track_position(human.track, jb, t);
  const Vec3 seg = pb - pa;
  const double len = seg.norm();
  // Degenerate segment: fall back to the vertical reference.
  const Vec3 axis = len > 1e-12 ? seg * (1.0 / len) : kWorldUp;
  return {pa + 0.5 * (pb - pa), axis};
}

double primitive_range(const HumanTarget& human, const Primitive& prim, double t) {
  return (primitive_frame(human, prim, t).center - human.tx_position).norm();
}

}  // namespace

ScatterSnapshot human_snapshot(const HumanTarget& human, double t) {
  validate_human(human);
  const double duration = human.track.duration();
  if (t < 0.0 || t > duration + 1e-9) {
    fail(ErrorCode::TimeOutOfRange, "snapshot time outside the track");
  }

  ScatterSnapshot snap;
  snap.time = t;
  snap.points.reserve(human.primitives.size());
  const double dt = 1.0 / human.track.sample_rate;

  for (const Primitive& prim : human.primitives) {
    const PrimitiveFrame frame = primitive_frame(human, prim, t);
    const Vec3 los = human.tx_position - frame.center;
    const double r = los.norm();
    if (r <= 0.0) {
      fail(ErrorCode::DegenerateGeometry, "primitive coincides with the transceiver");
    }
    const Vec3 u = los * (1.0 / r);

    // Local frame: z along the bound segment, x from the world-up reference.
    const Vec3 zhat = frame.axis;
    Vec3 xref = kWorldUp - kWorldUp.dot(zhat) * zhat;
    if (xref.norm() < 1e-9) {
      xref = kWorldX - kWorldX.dot(zhat) * zhat;
    }
    const Vec3 xhat = xref.normalized();
    const Vec3 yhat = zhat.cross(xhat);

    const double zenith = std::acos(std::clamp(u.dot(zhat), -1.0, 1.0));
    const double aspect = std::atan2(u.dot(yhat), u.dot(xhat));
    const double sigma = ellipsoid_rcs(prim.a, prim.b, prim.c, zenith, aspect);
    const double amplitude = prim.zeta * std::sqrt(sigma) / (r * r);

    // Diagnostic closing rate from a central range difference.
    const double tm = std::max(0.0, t - dt);
    const double tp = std::min(duration, t + dt);
    const double vr = tp > tm
        ? -(primitive_range(human, prim, tp) - primitive_range(human, prim, tm)) / (tp - tm)
        : 0.0;

    snap.points.push_back({r, amplitude, vr});
  }
  return snap;
}

ScatterSnapshot point_target_snapshot(double r0, double range_rate, double t,
                                      double reflectivity) {
  const double r = r0 + range_rate * t;
  if (r <= 0.0) {
    fail(ErrorCode::NonPositiveRange, "point target range must stay positive");
  }
  ScatterSnapshot snap;
  snap.time = t;
  snap.points.push_back({r, reflectivity / (r * r), -range_rate});
  return snap;
}

}  // namespace omds

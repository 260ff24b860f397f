#pragma once

namespace omds {

// Free-space propagation speed, the radar convention value. All range,
// delay and Doppler conversions in the library use this constant.
inline constexpr double kSpeedOfLight = 3.0e8;  // m/s

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace omds

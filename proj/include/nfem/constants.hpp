#pragma once
#include <numbers>

namespace nfem {

inline constexpr double kSpeedOfLight = 299792458.0;       // m/s
inline constexpr double kFreeSpaceImpedance = 376.730313668; // ohm
inline constexpr double kPi = std::numbers::pi;

} // namespace nfem

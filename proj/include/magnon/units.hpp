#pragma once

namespace magnon {

// Natural units: hbar = J = lattice spacing = 1. Times are in hbar/J,
// frequencies in J/hbar, lengths in lattice spacings.
inline constexpr double kHbar = 1.0;
inline constexpr double kLatticeSpacing = 1.0;

// Reference bounds on transport speed (units of lattice spacing * J / hbar).
inline constexpr double kGroupVelocityBound = 2.0;
inline constexpr double kLiebRobinsonBound = 6.0;

}  // namespace magnon

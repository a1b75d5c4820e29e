// units.hpp - physical constants and the unit bridge into the internal system.
//
// Internally time is in ps and every energy is an angular frequency in ps^-1
// (hbar = 1). Energies quoted in meV or ueV are converted once, at the
// boundary, with the helpers below.

#pragma once

namespace qds {

namespace constants {
inline constexpr double hbar = 0.6582119569;       // meV ps
inline constexpr double k_boltzmann = 0.0861733;   // meV / K
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

constexpr double mev_to_angfreq(double mev) { return mev / constants::hbar; }
constexpr double angfreq_to_mev(double w) { return w * constants::hbar; }
constexpr double uev_to_angfreq(double uev) { return 1e-3 * uev / constants::hbar; }
constexpr double angfreq_to_uev(double w) { return 1e3 * w * constants::hbar; }

// k_B T / hbar in ps^-1.
constexpr double thermal_freq(double kelvin) {
    return constants::k_boltzmann * kelvin / constants::hbar;
}

} // namespace qds

// Passive two-mirror resonator model: transmission phase, intracavity
// buildup, decay rate and sideband-frequency normalization.
//
// Conventions used throughout:
//   theta(f)  = 2*pi*f*l/c     round-trip phase at offset f from resonance,
//                              with l the optical round-trip length
//   Phi(f)    = arg( tau1*tau2*e^{i theta} / (1 - rho1*rho2*e^{i theta}) )
//   buildup   = |1 - rho1*rho2|^2 / |1 - rho1*rho2*e^{i theta}|^2
//   gamma     = c*(T + L)/l    full cavity linewidth in rad/s
//   kappa     = 2*pi*f/gamma
// Phi is odd in f, buildup is even, both have period FSR = c/l, and the
// buildup FWHM equals gamma/(2*pi) for high finesse.

#pragma once

#include <span>

namespace sqz {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

struct CavityParams {
    double rho1 = 0.0;                // amplitude reflectivity, coupling mirror
    double rho2 = 0.0;                // amplitude reflectivity, back mirror (loss lumped in)
    double tau1 = 0.0;                // amplitude transmissivity, coupling mirror
    double tau2 = 0.0;                // amplitude transmissivity, back mirror
    double roundtrip_length = 0.0;    // m, optical round trip
    double intracavity_loss = 0.0;    // power fraction per round trip (L)
    double output_transmittance = 0.0;  // power fraction of the output coupler (T)

    // Builds mirror amplitudes from the power quantities experimenters quote.
    // The round-trip amplitude factor is mapped exponentially,
    // rho1*rho2 = e^{-(T+L)/2}, so that the Airy linewidth and the decay
    // rate c*(T+L)/l describe the same resonator.
    static CavityParams from_power(double output_transmittance,
                                   double intracavity_loss,
                                   double roundtrip_length);

    // Throws std::invalid_argument when any invariant is violated.
    void validate() const;

    double roundtrip_amplitude() const { return rho1 * rho2; }
    double free_spectral_range() const { return kSpeedOfLight / roundtrip_length; }
    double finesse() const;
    double roundtrip_phase(double f_hz) const;  // theta(f)
};

// Frequency offset of a field from cavity resonance. Sign distinguishes
// above/below resonance.
struct Detuning {
    double hz = 0.0;
};

// Phase picked up by a field transmitted through the resonator at offset
// f_hz from resonance. Principal value in (-pi, pi]. Rejects non-finite input.
double transmission_phase(double f_hz, const CavityParams& cavity);

// Intracavity power normalized to its on-resonance value, in (0, 1].
double airy_buildup(double f_hz, const CavityParams& cavity);

// Cavity decay rate gamma = c*(T+L)/l in rad/s.
double decay_rate(const CavityParams& cavity);

// kappa = 2*pi*f/gamma.
double normalized_frequency(double f_hz, const CavityParams& cavity);

// Removes 2*pi jumps from a sequence of principal-value phases so that
// curves plot continuously across resonance.
void unwrap_phase(std::span<double> phases);

}  // namespace sqz

// Causal chain from a pump-power deviation to the squeezing level seen by
// the homodyne detector:
//
//   pump deviation -> thermal cavity detuning -> phase shifts of the control
//   sidebands and of the squeezed carrier band -> rotation of the squeezing
//   ellipse against the readout quadrature -> degraded detected squeezing.
//
// The ellipse co-moves with the carrier-band transmission phase Phi(f_det):
// both audio sidebands of the squeezed field pick up that common phase in
// the detuned resonator, which rotates the quadrature pattern by Phi(f_det).
// A readout locked to the transmitted control field follows the mean phase
// of the two control sidebands at +-f_ccf instead, so it tracks the ellipse
// only partially; the residual mismatch is what degrades the measurement.

#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sqz/cavity.hpp"
#include "sqz/opo.hpp"

namespace sqz {

// Raised when the phase lock cannot hold its operating point anymore
// (error-signal magnitude dropped below the electronic offset).
class LockPointLostError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when the effective pump ratio reaches or exceeds threshold.
class ThresholdError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Linear map from pump-power deviation to cavity detuning. The default
// coefficient maps a 10 % change of the 34.5 mW set point to 3 MHz.
struct ThermalCoupling {
    double coefficient_hz_per_w = 3.0e6 / 3.45e-3;
    double set_point_power_w = 0.0345;

    void validate() const;
};

// Readout composition for the detected-squeezing traces. Each mode adds one
// effect on top of the previous one.
enum class ReadoutMode {
    kFixedAngle,         // (a) ellipse rotation only, readout angle held fixed
    kDetunedOutput,      // (b) plus reduced parametric gain of the detuned resonator
    kPumpDependentGain,  // (c) plus pump ratio following the actual pump power
    kCoRotatingReadout,  // (d) plus readout angle following the control-field lock
};

struct ControlConfig {
    double f_ccf_hz = 15.2e6;             // control-field offset frequency
    ReadoutMode readout_mode = ReadoutMode::kCoRotatingReadout;
    double operating_point_offset = 0.0;  // normalized electronic offset o/M0 in (-1, 1)

    void validate() const;
};

struct SidebandPhases {
    double upper = 0.0;  // Phi(f_det + f_ccf), rad
    double lower = 0.0;  // Phi(f_det - f_ccf), rad

    double difference() const { return upper - lower; }  // Delta(f_det)
    double mean() const { return 0.5 * (upper + lower); }
};

struct DetectedSqueezing {
    double squeezing_db = 0.0;      // 10*log10 of the readout's squeezed variance
    double antisqueezing_db = 0.0;
    double ellipse_angle = 0.0;     // rad, lab-frame rotation of the ellipse
    double readout_angle = 0.0;     // rad, lab-frame rotation of the readout quadrature
};

// f_det = coefficient * delta_p.
Detuning detuning_from_pump(double delta_p_w, const ThermalCoupling& thermal);

// Transmission phases of the two control sidebands at f_det +- f_ccf.
SidebandPhases sideband_phase_pair(Detuning f_det, const ControlConfig& cfg,
                                   const CavityParams& cavity);

// Rotation of the squeezing ellipse induced by the detuning: the common
// transmission phase Phi(f_det) of the squeezed carrier band. Odd in f_det.
double ellipse_rotation(Detuning f_det, const ControlConfig& cfg, const CavityParams& cavity);

// Rotation of the readout quadrature when the homodyne angle is locked to
// the transmitted control field: the mean sideband phase. Odd in f_det.
double readout_corotation(Detuning f_det, const ControlConfig& cfg, const CavityParams& cavity);

// Extra readout rotation when the lock sits away from the error-signal zero
// crossing (offset s) and the signal magnitude changes by buildup_ratio:
// the lock point moves from asin(s) to asin(s / buildup_ratio). Zero for
// s = 0 or unchanged magnitude. Throws LockPointLostError when
// |s / buildup_ratio| > 1.
double operating_point_rotation(double buildup_ratio, const ControlConfig& cfg);

// Operating point of the chain at a given pump power: effective pump ratio
// after detuning and gain effects, and the angle between ellipse and readout.
struct ChainOperatingPoint {
    double detuning_hz = 0.0;
    double effective_pump_ratio = 0.0;
    double ellipse_angle = 0.0;
    double readout_angle = 0.0;

    double relative_angle() const { return ellipse_angle - readout_angle; }
};

ChainOperatingPoint chain_operating_point(double pump_power_w, ReadoutMode mode,
                                          const OpoParams& opo, const CavityParams& cavity,
                                          const ThermalCoupling& thermal,
                                          const ControlConfig& cfg);

// Full chain at a given pump power, audio-band limit (kappa = 0).
DetectedSqueezing detected_squeezing(double pump_power_w, ReadoutMode mode, const OpoParams& opo,
                                     const CavityParams& cavity, const ThermalCoupling& thermal,
                                     const ControlConfig& cfg);

// Same chain resolved at a given normalized sideband frequency; used by the
// long-run spectrogram. Returns the rotated readout variances.
VariancePair detected_variances(double pump_power_w, ReadoutMode mode, const OpoParams& opo,
                                const CavityParams& cavity, const ThermalCoupling& thermal,
                                const ControlConfig& cfg, double kappa);

// Normalized transmission of an on-resonance alignment beam as the pump
// power is swept: airy_buildup(detuning_from_pump(P - set point)).
std::vector<std::pair<double, double>> resonance_curve(std::span<const double> pump_powers_w,
                                                       const ThermalCoupling& thermal,
                                                       const CavityParams& cavity);

}  // namespace sqz

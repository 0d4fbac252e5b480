// Table builders behind the CLI subcommands: pump-power resonance sweep,
// detuning phase curves, detected-squeezing traces and the calibration
// report.

#pragma once

#include <string>
#include <vector>

#include "sqz/config.hpp"
#include "sqz/table.hpp"

namespace sqz {

// (pump power, normalized transmission) over set point * (1 +- span).
CurveTable make_resonance_table(const RunConfig& config, double span_fraction, int points);

// (detuning, transmission phase, sideband phase difference, ellipse
// rotation, readout rotation), all angle columns unwrapped over the sweep.
CurveTable make_phase_table(const RunConfig& config, double f_min_hz, double f_max_hz, int points);

// Detected squeezing in dB per selected readout mode over a pump span, with
// the corresponding detuning as an extra column.
CurveTable make_fig4_table(const RunConfig& config, const std::vector<ReadoutMode>& traces,
                           double span_fraction, int points);

struct CalibrationReport {
    double pump_ratio = 0.0;
    double detection_efficiency = 0.0;
    double threshold_power_w = 0.0;  // implied by the set-point power; 0 if x = 0
    double residual_db = 0.0;        // worst forward-check mismatch
    bool eta_unconstrained = false;
};

CalibrationReport make_calibration_report(double sqz_db, double antisqz_db,
                                          double set_point_power_w);

}  // namespace sqz

// Below-threshold OPO quadrature variances, decibel conversion, rotated
// homodyne readout and calibration from a measured squeezing pair.
//
// Variances are relative to shot noise (1 = vacuum) and kept linear
// everywhere; decibels appear only at I/O boundaries. With x = P/P_th and
// kappa the normalized sideband frequency,
//
//   R_{a/s} = 1 +- eta_tot * 4*sqrt(x) / ((1 -+ sqrt(x))^2 + 4*kappa^2)
//
// and a readout rotated by an angle Theta away from the ellipse axes sees
//
//   V'_{a/s} = V_{a/s} cos^2(Theta) + V_{s/a} sin^2(Theta).

#pragma once

#include <stdexcept>

namespace sqz {

class CalibrationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OpoParams {
    double pump_ratio = 0.0;            // x = P/P_th, below threshold: 0 <= x < 1
    double detection_efficiency = 1.0;  // eta_tot in [0, 1]
    double threshold_power = 0.0;       // W; 0 means not set (reporting only)

    void validate() const;  // throws std::invalid_argument
};

struct SqueezingEllipse {
    double v_squeezed = 1.0;      // V_s, 0 < V_s <= 1
    double v_antisqueezed = 1.0;  // V_a, V_a >= 1 and V_a*V_s >= 1
    double angle = 0.0;           // rad, orientation in the readout plane

    void validate() const;
};

// Anti-squeezing first, matching the +/- order of the variance formula.
struct VariancePair {
    double anti = 1.0;
    double sqz = 1.0;
};

// Quadrature variances of the OPO output. kappa >= 0. Throws on x >= 1
// (at or above threshold the squeezing-branch denominator vanishes at
// kappa = 0) and on invalid parameters.
VariancePair quadrature_variances(const OpoParams& opo, double kappa);

// Variances seen by a homodyne readout rotated by theta from the ellipse axes.
VariancePair rotate_readout(const SqueezingEllipse& ellipse, double theta);

double to_decibel(double variance);  // 10*log10(v); rejects v <= 0
double from_decibel(double db);

struct CalibrationResult {
    OpoParams params;               // pump_ratio and detection_efficiency set
    bool eta_unconstrained = false; // true for the degenerate no-pump pair
    double residual_db = 0.0;       // worst |forward - input| of the dB pair
};

// Inverts the variance pair (sqz_db < 0 < antisqz_db, in dB relative to shot
// noise) at kappa = 0 into (pump_ratio, detection_efficiency). Uses the
// closed form eta = a*b/(a - b), a = R_a - 1, b = 1 - R_s, then solves
// 4*sqrt(x)/(1 - sqrt(x))^2 = a/eta. Throws CalibrationError for infeasible
// pairs (R_a*R_s < 1, equivalently implied eta > 1).
CalibrationResult calibrate(double sqz_db, double antisqz_db);

}  // namespace sqz

#include "sqz/opo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sqz {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void OpoParams::validate() const {
    require(std::isfinite(pump_ratio) && std::isfinite(detection_efficiency) &&
                std::isfinite(threshold_power),
            "OpoParams: non-finite parameter");
    require(pump_ratio >= 0.0 && pump_ratio < 1.0,
            "OpoParams: pump_ratio must satisfy 0 <= x < 1 (below threshold)");
    require(detection_efficiency >= 0.0 && detection_efficiency <= 1.0,
            "OpoParams: detection_efficiency outside [0, 1]");
    require(threshold_power >= 0.0, "OpoParams: threshold_power must be >= 0");
}

void SqueezingEllipse::validate() const {
    require(std::isfinite(v_squeezed) && std::isfinite(v_antisqueezed) && std::isfinite(angle),
            "SqueezingEllipse: non-finite field");
    require(v_squeezed > 0.0 && v_squeezed <= 1.0 + 1e-12,
            "SqueezingEllipse: v_squeezed outside (0, 1]");
    require(v_antisqueezed >= 1.0 - 1e-12, "SqueezingEllipse: v_antisqueezed below 1");
    require(v_antisqueezed * v_squeezed >= 1.0 - 1e-9,
            "SqueezingEllipse: V_a*V_s >= 1 violated");
}

VariancePair quadrature_variances(const OpoParams& opo, double kappa) {
    opo.validate();
    require(std::isfinite(kappa) && kappa >= 0.0, "quadrature_variances: kappa must be >= 0");
    const double u = std::sqrt(opo.pump_ratio);
    const double eta = opo.detection_efficiency;
    const double k2 = 4.0 * kappa * kappa;
    VariancePair r;
    r.anti = 1.0 + eta * 4.0 * u / ((1.0 - u) * (1.0 - u) + k2);
    r.sqz = 1.0 - eta * 4.0 * u / ((1.0 + u) * (1.0 + u) + k2);
    return r;
}

VariancePair rotate_readout(const SqueezingEllipse& ellipse, double theta) {
    ellipse.validate();
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    VariancePair r;
    r.anti = ellipse.v_antisqueezed * c2 + ellipse.v_squeezed * s2;
    r.sqz = ellipse.v_squeezed * c2 + ellipse.v_antisqueezed * s2;
    return r;
}

double to_decibel(double variance) {
    require(std::isfinite(variance) && variance > 0.0, "to_decibel: variance must be positive");
    return 10.0 * std::log10(variance);
}

double from_decibel(double db) {
    require(std::isfinite(db), "from_decibel: non-finite input");
    return std::pow(10.0, db / 10.0);
}

CalibrationResult calibrate(double sqz_db, double antisqz_db) {
    if (!std::isfinite(sqz_db) || !std::isfinite(antisqz_db))
        throw CalibrationError("calibrate: non-finite input pair");
    if (sqz_db > 0.0 || antisqz_db < 0.0)
        throw CalibrationError("calibrate: expected sqz_db <= 0 <= antisqz_db");

    CalibrationResult out;
    // Degenerate no-pump pair: x -> 0 with eta unconstrained.
    if (std::abs(sqz_db) < 1e-12 && std::abs(antisqz_db) < 1e-12) {
        out.params.pump_ratio = 0.0;
        out.params.detection_efficiency = 1.0;
        out.eta_unconstrained = true;
        return out;
    }

    const double r_s = from_decibel(sqz_db);
    const double r_a = from_decibel(antisqz_db);
    if (r_a * r_s < 1.0 - 1e-12)
        throw CalibrationError("calibrate: infeasible pair, R_a*R_s < 1 violates the "
                               "uncertainty bound (implied efficiency above 1)");

    const double a = r_a - 1.0;
    const double b = 1.0 - r_s;
    if (b < 1e-15)
        throw CalibrationError("calibrate: squeezing side sits at shot noise, pair cannot "
                               "be produced by a below-threshold OPO with eta > 0");
    if (a <= b)
        throw CalibrationError("calibrate: degenerate pair, anti-squeezing excess does not "
                               "exceed squeezing deficit");

    const double eta = a * b / (a - b);
    if (eta > 1.0 + 1e-12)
        throw CalibrationError("calibrate: implied detection efficiency above 1");

    // 4u/(1-u)^2 = A has the below-threshold root u = (sqrt(A+1) - 1)^2 / A.
    const double big_a = a / eta;
    const double s = std::sqrt(big_a + 1.0) - 1.0;
    const double u = s * s / big_a;

    out.params.pump_ratio = u * u;
    out.params.detection_efficiency = std::min(eta, 1.0);

    const VariancePair fwd = quadrature_variances(out.params, 0.0);
    out.residual_db = std::max(std::abs(to_decibel(fwd.sqz) - sqz_db),
                               std::abs(to_decibel(fwd.anti) - antisqz_db));
    return out;
}

}  // namespace sqz

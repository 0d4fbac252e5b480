#include "sqz/control.hpp"

#include <cmath>
#include <string>

namespace sqz {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void ThermalCoupling::validate() const {
    require(std::isfinite(coefficient_hz_per_w), "ThermalCoupling: non-finite coefficient");
    require(std::isfinite(set_point_power_w) && set_point_power_w > 0.0,
            "ThermalCoupling: set_point_power must be positive");
}

void ControlConfig::validate() const {
    require(std::isfinite(f_ccf_hz) && f_ccf_hz > 0.0, "ControlConfig: f_ccf must be positive");
    require(std::isfinite(operating_point_offset) && std::abs(operating_point_offset) < 1.0,
            "ControlConfig: operating_point_offset outside (-1, 1)");
}

Detuning detuning_from_pump(double delta_p_w, const ThermalCoupling& thermal) {
    thermal.validate();
    require(std::isfinite(delta_p_w), "detuning_from_pump: non-finite power deviation");
    return Detuning{thermal.coefficient_hz_per_w * delta_p_w};
}

SidebandPhases sideband_phase_pair(Detuning f_det, const ControlConfig& cfg,
                                   const CavityParams& cavity) {
    cfg.validate();
    SidebandPhases p;
    p.upper = transmission_phase(f_det.hz + cfg.f_ccf_hz, cavity);
    p.lower = transmission_phase(f_det.hz - cfg.f_ccf_hz, cavity);
    return p;
}

double ellipse_rotation(Detuning f_det, const ControlConfig& cfg, const CavityParams& cavity) {
    cfg.validate();
    return transmission_phase(f_det.hz, cavity);
}

double readout_corotation(Detuning f_det, const ControlConfig& cfg, const CavityParams& cavity) {
    return sideband_phase_pair(f_det, cfg, cavity).mean();
}

double operating_point_rotation(double buildup_ratio, const ControlConfig& cfg) {
    cfg.validate();
    require(std::isfinite(buildup_ratio) && buildup_ratio > 0.0,
            "operating_point_rotation: buildup_ratio must be positive");
    const double s = cfg.operating_point_offset;
    if (s == 0.0) return 0.0;  // zero crossing: magnitude changes have no effect
    const double shifted = s / buildup_ratio;
    if (std::abs(shifted) > 1.0)
        throw LockPointLostError("operating point beyond error-signal range, lock lost");
    return std::asin(shifted) - std::asin(s);
}

ChainOperatingPoint chain_operating_point(double pump_power_w, ReadoutMode mode,
                                          const OpoParams& opo, const CavityParams& cavity,
                                          const ThermalCoupling& thermal,
                                          const ControlConfig& cfg) {
    opo.validate();
    cavity.validate();
    require(std::isfinite(pump_power_w) && pump_power_w >= 0.0,
            "chain_operating_point: pump power must be >= 0");

    ChainOperatingPoint op;
    const Detuning f_det = detuning_from_pump(pump_power_w - thermal.set_point_power_w, thermal);
    op.detuning_hz = f_det.hz;
    op.ellipse_angle = ellipse_rotation(f_det, cfg, cavity);
    const double buildup = airy_buildup(f_det.hz, cavity);

    double x = opo.pump_ratio;
    if (mode == ReadoutMode::kPumpDependentGain || mode == ReadoutMode::kCoRotatingReadout)
        x *= pump_power_w / thermal.set_point_power_w;
    if (mode != ReadoutMode::kFixedAngle) x *= buildup;
    if (x >= 1.0)
        throw ThresholdError("chain_operating_point: effective pump ratio at or above threshold");
    op.effective_pump_ratio = x;

    if (mode == ReadoutMode::kCoRotatingReadout) {
        op.readout_angle = readout_corotation(f_det, cfg, cavity);
        if (cfg.operating_point_offset != 0.0)
            op.readout_angle += operating_point_rotation(std::sqrt(buildup), cfg);
    }
    return op;
}

VariancePair detected_variances(double pump_power_w, ReadoutMode mode, const OpoParams& opo,
                                const CavityParams& cavity, const ThermalCoupling& thermal,
                                const ControlConfig& cfg, double kappa) {
    const ChainOperatingPoint op =
        chain_operating_point(pump_power_w, mode, opo, cavity, thermal, cfg);
    OpoParams effective = opo;
    effective.pump_ratio = op.effective_pump_ratio;
    const VariancePair v = quadrature_variances(effective, kappa);
    const SqueezingEllipse ellipse{v.sqz, v.anti, op.ellipse_angle};
    return rotate_readout(ellipse, op.relative_angle());
}

DetectedSqueezing detected_squeezing(double pump_power_w, ReadoutMode mode, const OpoParams& opo,
                                     const CavityParams& cavity, const ThermalCoupling& thermal,
                                     const ControlConfig& cfg) {
    const ChainOperatingPoint op =
        chain_operating_point(pump_power_w, mode, opo, cavity, thermal, cfg);
    OpoParams effective = opo;
    effective.pump_ratio = op.effective_pump_ratio;
    const VariancePair v = quadrature_variances(effective, 0.0);
    const SqueezingEllipse ellipse{v.sqz, v.anti, op.ellipse_angle};
    const VariancePair rotated = rotate_readout(ellipse, op.relative_angle());

    DetectedSqueezing out;
    out.squeezing_db = to_decibel(rotated.sqz);
    out.antisqueezing_db = to_decibel(rotated.anti);
    out.ellipse_angle = op.ellipse_angle;
    out.readout_angle = op.readout_angle;
    return out;
}

std::vector<std::pair<double, double>> resonance_curve(std::span<const double> pump_powers_w,
                                                       const ThermalCoupling& thermal,
                                                       const CavityParams& cavity) {
    require(!pump_powers_w.empty(), "resonance_curve: empty power list");
    cavity.validate();
    std::vector<std::pair<double, double>> curve;
    curve.reserve(pump_powers_w.size());
    for (double p : pump_powers_w) {
        const Detuning f_det = detuning_from_pump(p - thermal.set_point_power_w, thermal);
        curve.emplace_back(p, airy_buildup(f_det.hz, cavity));
    }
    return curve;
}

}  // namespace sqz

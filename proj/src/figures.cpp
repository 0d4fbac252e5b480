#include "sqz/figures.hpp"

#include <cmath>
#include <stdexcept>

namespace sqz {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        v[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return v;
}

}  // namespace

CurveTable make_resonance_table(const RunConfig& config, double span_fraction, int points) {
    require(points >= 2, "resonance: need at least 2 points");
    require(span_fraction > 0.0, "resonance: span must be positive");
    const CavityParams cavity = config.cavity.build();
    const double p0 = config.thermal.set_point_power_w;
    const auto powers = linspace(p0 * (1.0 - span_fraction), p0 * (1.0 + span_fraction), points);
    const auto curve = resonance_curve(powers, config.thermal, cavity);

    CurveTable t;
    t.columns = {"pump_power_w", "pump_deviation_fraction", "normalized_transmission"};
    t.provenance = "resonance sweep, set point " + format_double(p0) + " W";
    for (const auto& [p, v] : curve) t.append({p, p / p0 - 1.0, v});
    return t;
}

CurveTable make_phase_table(const RunConfig& config, double f_min_hz, double f_max_hz,
                            int points) {
    require(points >= 2, "phase: need at least 2 points");
    require(f_max_hz > f_min_hz, "phase: empty frequency span");
    const CavityParams cavity = config.cavity.build();
    const auto detunings = linspace(f_min_hz, f_max_hz, points);

    const std::size_t n = detunings.size();
    std::vector<double> phi(n), upper(n), lower(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Detuning d{detunings[i]};
        phi[i] = transmission_phase(d.hz, cavity);
        const SidebandPhases p = sideband_phase_pair(d, config.control, cavity);
        upper[i] = p.upper;
        lower[i] = p.lower;
    }
    unwrap_phase(phi);
    unwrap_phase(upper);
    unwrap_phase(lower);

    CurveTable t;
    t.columns = {"detuning_hz", "transmission_phase_rad", "sideband_delta_rad",
                 "ellipse_rotation_rad", "readout_rotation_rad"};
    t.provenance = "phase curves, f_ccf " + format_double(config.control.f_ccf_hz) + " Hz";
    for (std::size_t i = 0; i < n; ++i) {
        // with the ellipse co-moving with the carrier band, its rotation is
        // the unwrapped transmission phase itself
        t.append({detunings[i], phi[i], upper[i] - lower[i], phi[i],
                  0.5 * (upper[i] + lower[i])});
    }
    return t;
}

CurveTable make_fig4_table(const RunConfig& config, const std::vector<ReadoutMode>& traces,
                           double span_fraction, int points) {
    require(points >= 2, "fig4: need at least 2 points");
    require(span_fraction > 0.0, "fig4: span must be positive");
    require(!traces.empty(), "fig4: no traces selected");

    const CavityParams cavity = config.cavity.build();
    const OpoParams opo = config.resolve_opo();
    const double p0 = config.thermal.set_point_power_w;
    const auto powers = linspace(p0 * (1.0 - span_fraction), p0 * (1.0 + span_fraction), points);

    CurveTable t;
    t.columns = {"pump_power_w", "pump_deviation_fraction", "detuning_hz"};
    for (ReadoutMode mode : traces) t.columns.push_back("trace_" + readout_mode_name(mode) + "_db");
    t.provenance = "detected squeezing vs pump power, set point " + format_double(p0) + " W";

    for (double p : powers) {
        std::vector<double> row{p, p / p0 - 1.0,
                                detuning_from_pump(p - p0, config.thermal).hz};
        for (ReadoutMode mode : traces) {
            const DetectedSqueezing d =
                detected_squeezing(p, mode, opo, cavity, config.thermal, config.control);
            row.push_back(d.squeezing_db);
        }
        t.append(std::move(row));
    }
    return t;
}

CalibrationReport make_calibration_report(double sqz_db, double antisqz_db,
                                          double set_point_power_w) {
    const CalibrationResult r = calibrate(sqz_db, antisqz_db);
    CalibrationReport report;
    report.pump_ratio = r.params.pump_ratio;
    report.detection_efficiency = r.params.detection_efficiency;
    report.threshold_power_w =
        r.params.pump_ratio > 0.0 ? set_point_power_w / r.params.pump_ratio : 0.0;
    report.residual_db = r.residual_db;
    report.eta_unconstrained = r.eta_unconstrained;
    return report;
}

}  // namespace sqz

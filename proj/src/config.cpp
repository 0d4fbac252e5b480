#include "sqz/config.hpp"

#include <cmath>
#include <fstream>

namespace sqz {

namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

ReadoutMode parse_readout_mode(const std::string& name) {
    if (name == "fixed_angle" || name == "a") return ReadoutMode::kFixedAngle;
    if (name == "detuned_output" || name == "b") return ReadoutMode::kDetunedOutput;
    if (name == "pump_dependent_gain" || name == "c") return ReadoutMode::kPumpDependentGain;
    if (name == "co_rotating" || name == "d") return ReadoutMode::kCoRotatingReadout;
    throw ConfigError("unknown readout mode '" + name + "'");
}

std::string readout_mode_name(ReadoutMode mode) {
    switch (mode) {
        case ReadoutMode::kFixedAngle: return "fixed_angle";
        case ReadoutMode::kDetunedOutput: return "detuned_output";
        case ReadoutMode::kPumpDependentGain: return "pump_dependent_gain";
        case ReadoutMode::kCoRotatingReadout: return "co_rotating";
    }
    throw ConfigError("invalid readout mode value");
}

void RunConfig::validate() const {
    if (opo.has_value() == calibration.has_value())
        throw ConfigError("config: exactly one of 'opo' or 'calibration' must be supplied");
    try {
        to_sim().validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const CalibrationError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

OpoParams RunConfig::resolve_opo() const {
    OpoParams params;
    if (opo.has_value()) {
        params = *opo;
    } else if (calibration.has_value()) {
        params = calibrate(calibration->squeezing_db, calibration->antisqueezing_db).params;
    } else {
        throw ConfigError("config: neither 'opo' nor 'calibration' supplied");
    }
    if (params.threshold_power <= 0.0 && params.pump_ratio > 0.0)
        params.threshold_power = thermal.set_point_power_w / params.pump_ratio;
    return params;
}

SimConfig RunConfig::to_sim() const {
    SimConfig sim;
    sim.cavity = cavity.build();
    sim.opo = resolve_opo();
    sim.thermal = thermal;
    sim.control = control;
    sim.noise = noise;
    sim.loop = loop;
    sim.lock = lock;
    sim.spectrogram = spectrogram;
    sim.duration_s = duration_s;
    sim.dt_s = dt_s;
    sim.timeseries_stride = timeseries_stride;
    return sim;
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    try {
        if (j.contains("cavity")) {
            const auto& jc = j.at("cavity");
            read(jc, "output_transmittance", c.cavity.output_transmittance);
            read(jc, "intracavity_loss", c.cavity.intracavity_loss);
            read(jc, "roundtrip_length_m", c.cavity.roundtrip_length_m);
        }
        if (j.contains("opo") && j.contains("calibration"))
            throw ConfigError("config: 'opo' and 'calibration' are mutually exclusive");
        if (j.contains("opo")) {
            const auto& jo = j.at("opo");
            OpoParams p;
            read(jo, "pump_ratio", p.pump_ratio);
            read(jo, "detection_efficiency", p.detection_efficiency);
            read(jo, "threshold_power_w", p.threshold_power);
            c.opo = p;
            c.calibration.reset();
        }
        if (j.contains("calibration")) {
            const auto& jc = j.at("calibration");
            CalibrationPair p;
            read(jc, "squeezing_db", p.squeezing_db);
            read(jc, "antisqueezing_db", p.antisqueezing_db);
            c.calibration = p;
            c.opo.reset();
        }
        if (j.contains("thermal")) {
            const auto& jt = j.at("thermal");
            read(jt, "coefficient_hz_per_w", c.thermal.coefficient_hz_per_w);
            read(jt, "set_point_power_w", c.thermal.set_point_power_w);
        }
        if (j.contains("control")) {
            const auto& jc = j.at("control");
            read(jc, "ccf_frequency_hz", c.control.f_ccf_hz);
            read(jc, "operating_point_offset", c.control.operating_point_offset);
            if (jc.contains("readout_mode"))
                c.control.readout_mode = parse_readout_mode(jc.at("readout_mode").get<std::string>());
        }
        if (j.contains("noise")) {
            const auto& jn = j.at("noise");
            read(jn, "relative_sigma", c.noise.relative_sigma);
            read(jn, "correlation_time_s", c.noise.correlation_time_s);
            read(jn, "drift_rate_per_hour", c.noise.drift_rate_per_hour);
            read(jn, "seed", c.noise.seed);
        }
        if (j.contains("loop")) {
            const auto& jl = j.at("loop");
            read(jl, "unity_gain_hz", c.loop.unity_gain_hz);
            read(jl, "enabled", c.loop.enabled);
            read(jl, "actuator_range", c.loop.actuator_range);
        }
        if (j.contains("lock")) {
            const auto& jl = j.at("lock");
            read(jl, "lockloss_rate_per_hour", c.lock.lockloss_rate_per_hour);
            read(jl, "reacquisition_time_s", c.lock.reacquisition_time_s);
        }
        if (j.contains("spectrogram")) {
            const auto& js = j.at("spectrogram");
            read(js, "bin_duration_s", c.spectrogram.bin_duration_s);
            read(js, "fft_segment_s", c.spectrogram.fft_segment_s);
            read(js, "frequency_min_hz", c.spectrogram.frequency_min_hz);
            read(js, "frequency_max_hz", c.spectrogram.frequency_max_hz);
            read(js, "points_per_decade", c.spectrogram.points_per_decade);
            if (js.contains("pickup_lines")) {
                c.spectrogram.pickup_lines.clear();
                for (const auto& jp : js.at("pickup_lines")) {
                    PickupLine line;
                    read(jp, "frequency_hz", line.frequency_hz);
                    read(jp, "cap_db", line.cap_db);
                    read(jp, "half_width_hz", line.half_width_hz);
                    c.spectrogram.pickup_lines.push_back(line);
                }
            }
        }
        if (j.contains("run")) {
            const auto& jr = j.at("run");
            read(jr, "duration_s", c.duration_s);
            read(jr, "dt_s", c.dt_s);
            read(jr, "timeseries_stride", c.timeseries_stride);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: malformed document: ") + e.what());
    }
    return c;
}

json RunConfig::to_json() const {
    json j;
    j["cavity"] = {{"output_transmittance", cavity.output_transmittance},
                   {"intracavity_loss", cavity.intracavity_loss},
                   {"roundtrip_length_m", cavity.roundtrip_length_m}};
    if (opo.has_value()) {
        j["opo"] = {{"pump_ratio", opo->pump_ratio},
                    {"detection_efficiency", opo->detection_efficiency},
                    {"threshold_power_w", opo->threshold_power}};
    }
    if (calibration.has_value()) {
        j["calibration"] = {{"squeezing_db", calibration->squeezing_db},
                            {"antisqueezing_db", calibration->antisqueezing_db}};
    }
    j["thermal"] = {{"coefficient_hz_per_w", thermal.coefficient_hz_per_w},
                    {"set_point_power_w", thermal.set_point_power_w}};
    j["control"] = {{"ccf_frequency_hz", control.f_ccf_hz},
                    {"readout_mode", readout_mode_name(control.readout_mode)},
                    {"operating_point_offset", control.operating_point_offset}};
    j["noise"] = {{"relative_sigma", noise.relative_sigma},
                  {"correlation_time_s", noise.correlation_time_s},
                  {"drift_rate_per_hour", noise.drift_rate_per_hour},
                  {"seed", noise.seed}};
    j["loop"] = {{"unity_gain_hz", loop.unity_gain_hz},
                 {"enabled", loop.enabled},
                 {"actuator_range", loop.actuator_range}};
    j["lock"] = {{"lockloss_rate_per_hour", lock.lockloss_rate_per_hour},
                 {"reacquisition_time_s", lock.reacquisition_time_s}};
    json lines = json::array();
    for (const auto& line : spectrogram.pickup_lines)
        lines.push_back({{"frequency_hz", line.frequency_hz},
                         {"cap_db", line.cap_db},
                         {"half_width_hz", line.half_width_hz}});
    j["spectrogram"] = {{"bin_duration_s", spectrogram.bin_duration_s},
                        {"fft_segment_s", spectrogram.fft_segment_s},
                        {"frequency_min_hz", spectrogram.frequency_min_hz},
                        {"frequency_max_hz", spectrogram.frequency_max_hz},
                        {"points_per_decade", spectrogram.points_per_decade},
                        {"pickup_lines", lines}};
    j["run"] = {{"duration_s", duration_s},
                {"dt_s", dt_s},
                {"timeseries_stride", timeseries_stride}};
    return j;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config: parse error in '" + path + "': " + e.what());
    }
    return from_json(j);
}

}  // namespace sqz

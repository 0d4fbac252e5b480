// sqzsim: command-line front end for the squeezed-light source simulator.
//
// Subcommands: resonance, phase, fig4, longrun, calibrate.
// Exit codes: 0 success, 1 usage error, 2 config validation error,
// 3 runtime/model error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqz/figures.hpp"
#include "sqz/longrun.hpp"

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
};

sqz::RunConfig load_config(const GlobalOptions& opts) {
    sqz::RunConfig config;
    if (!opts.config_path.empty()) config = sqz::RunConfig::load(opts.config_path);
    if (opts.seed.has_value()) config.noise.seed = *opts.seed;
    config.validate();
    return config;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path.string() + "'");
    out << contents;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_table(const fs::path& path, const sqz::CurveTable& table) {
    std::ostringstream os;
    table.write_csv(os);
    write_file(path, os.str());
}

std::vector<sqz::ReadoutMode> parse_traces(const std::string& list) {
    std::vector<sqz::ReadoutMode> traces;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        traces.push_back(sqz::parse_readout_mode(item));
    }
    if (traces.empty()) throw sqz::ConfigError("no traces selected");
    return traces;
}

std::string spectrogram_csv(const sqz::Spectrogram& s) {
    std::ostringstream os;
    os << "bin_start_s";
    for (double f : s.frequency_grid_hz) os << "," << sqz::format_double(f);
    os << "\n";
    for (std::size_t b = 0; b < s.time_bins_s.size(); ++b) {
        os << sqz::format_double(s.time_bins_s[b]);
        for (double v : s.values_db[b]) os << "," << sqz::format_double(v);
        os << "\n";
    }
    return os.str();
}

nlohmann::json spectrogram_json(const sqz::Spectrogram& s) {
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& line : s.pickup_lines)
        lines.push_back({{"frequency_hz", line.frequency_hz},
                         {"cap_db", line.cap_db},
                         {"half_width_hz", line.half_width_hz}});
    return {{"bin_duration_s", s.bin_duration_s},
            {"fft_segment_s", s.fft_segment_s},
            {"time_bins_s", s.time_bins_s},
            {"frequency_grid_hz", s.frequency_grid_hz},
            {"values_db", s.values_db},
            {"pickup_lines", lines}};
}

nlohmann::json stats_json(const sqz::RunStats& st) {
    return {{"duty_cycle", st.duty_cycle},
            {"n_locklosses", st.n_locklosses},
            {"longest_lock_s", st.longest_lock_s},
            {"mean_squeezing_db", st.mean_squeezing_db},
            {"raw_deviation_rms", st.raw_deviation_rms},
            {"residual_deviation_rms", st.residual_deviation_rms},
            {"locked_time_s", st.locked_time_s},
            {"duration_s", st.duration_s}};
}

int run_longrun(const GlobalOptions& opts) {
    const sqz::RunConfig config = load_config(opts);
    if (config.duration_s == 0.0)
        std::cerr << "warning: zero duration, emitting empty spectrogram\n";

    const sqz::RunResult result = sqz::run(config.to_sim());
    const fs::path out(opts.out_dir);
    fs::create_directories(out);

    write_file(out / "spectrogram.csv", spectrogram_csv(result.spectrogram));
    write_file(out / "spectrogram.json", spectrogram_json(result.spectrogram).dump(2) + "\n");
    write_file(out / "stats.json", stats_json(result.stats).dump(2) + "\n");

    std::ostringstream events;
    events << "time_s,event\n";
    for (const auto& e : result.events)
        events << sqz::format_double(e.time_s) << "," << e.kind << "\n";
    write_file(out / "events.csv", events.str());

    sqz::CurveTable ts;
    ts.columns = {"time_s", "raw_deviation", "residual_deviation", "detuning_hz", "level_db",
                  "locked"};
    ts.provenance = "long-run time series, seed " + std::to_string(config.noise.seed);
    for (const auto& p : result.timeseries)
        ts.append({p.time_s, p.raw_deviation, p.residual_deviation, p.detuning_hz, p.level_db,
                   p.locked ? 1.0 : 0.0});
    write_table(out / "timeseries.csv", ts);

    std::cout << "duty_cycle " << sqz::format_double(result.stats.duty_cycle) << "\n"
              << "n_locklosses " << result.stats.n_locklosses << "\n"
              << "longest_lock_s " << sqz::format_double(result.stats.longest_lock_s) << "\n"
              << "mean_squeezing_db " << sqz::format_double(result.stats.mean_squeezing_db)
              << "\n";
    return 0;
}

int run_calibrate(double sqz_db, double antisqz_db, const GlobalOptions& opts) {
    sqz::RunConfig config;
    if (!opts.config_path.empty()) config = sqz::RunConfig::load(opts.config_path);
    const sqz::CalibrationReport r =
        sqz::make_calibration_report(sqz_db, antisqz_db, config.thermal.set_point_power_w);
    std::cout << "pump_ratio " << sqz::format_double(r.pump_ratio) << "\n"
              << "detection_efficiency " << sqz::format_double(r.detection_efficiency)
              << (r.eta_unconstrained ? " (unconstrained at zero pump)" : "") << "\n"
              << "threshold_power_w " << sqz::format_double(r.threshold_power_w) << "\n"
              << "forward_residual_db " << sqz::format_double(r.residual_db) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical model of an audio-band squeezed-vacuum source under coherent "
                 "control: cavity curves, detected-squeezing traces and long-run statistics"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand name

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "JSON configuration file");
    app.add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override the noise seed");

    auto* resonance = app.add_subcommand("resonance", "pump-power sweep of the cavity transmission");
    double res_span = 0.20;
    int res_points = 201;
    resonance->add_option("--span", res_span, "half-span as a fraction of the set point")
        ->capture_default_str();
    resonance->add_option("--points", res_points, "number of sweep points")->capture_default_str();

    auto* phase = app.add_subcommand("phase", "transmission phase and rotation angles vs detuning");
    double f_min = -20.0e6, f_max = 20.0e6;
    int phase_points = 801;
    phase->add_option("--fmin", f_min, "lowest detuning, Hz")->capture_default_str();
    phase->add_option("--fmax", f_max, "highest detuning, Hz")->capture_default_str();
    phase->add_option("--points", phase_points, "number of sweep points")->capture_default_str();

    auto* fig4 = app.add_subcommand("fig4", "detected squeezing vs pump power per readout mode");
    std::string traces = "a,b,c,d";
    double fig4_span = 0.10;
    int fig4_points = 200;
    fig4->add_option("--traces", traces, "comma list of a,b,c,d or mode names")
        ->capture_default_str();
    fig4->add_option("--span", fig4_span, "half-span as a fraction of the set point")
        ->capture_default_str();
    fig4->add_option("--points", fig4_points, "number of sweep points")->capture_default_str();

    auto* longrun = app.add_subcommand("longrun", "time-domain run with spectrogram and statistics");

    auto* calibrate = app.add_subcommand("calibrate", "invert a squeezing/anti-squeezing pair");
    double cal_sqz = 0.0, cal_anti = 0.0;
    calibrate->add_option("--sqz", cal_sqz, "measured squeezing, dB (negative)")->required();
    calibrate->add_option("--antisqz", cal_anti, "measured anti-squeezing, dB (positive)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }
    if (seed_opt->count() > 0) opts.seed = seed_value;

    try {
        if (resonance->parsed()) {
            if (res_points < 2 || res_span <= 0.0) {
                std::cerr << "usage error: resonance needs span > 0 and points >= 2\n";
                return 1;
            }
            const sqz::RunConfig config = load_config(opts);
            fs::create_directories(opts.out_dir);
            write_table(fs::path(opts.out_dir) / "resonance.csv",
                        sqz::make_resonance_table(config, res_span, res_points));
        } else if (phase->parsed()) {
            if (phase_points < 2 || f_max <= f_min) {
                std::cerr << "usage error: phase needs fmax > fmin and points >= 2\n";
                return 1;
            }
            const sqz::RunConfig config = load_config(opts);
            fs::create_directories(opts.out_dir);
            write_table(fs::path(opts.out_dir) / "phase.csv",
                        sqz::make_phase_table(config, f_min, f_max, phase_points));
        } else if (fig4->parsed()) {
            std::vector<sqz::ReadoutMode> modes;
            try {
                modes = parse_traces(traces);
            } catch (const sqz::ConfigError& e) {
                std::cerr << "usage error: " << e.what() << "\n";
                return 1;
            }
            if (fig4_points < 2 || fig4_span <= 0.0) {
                std::cerr << "usage error: fig4 needs span > 0 and points >= 2\n";
                return 1;
            }
            const sqz::RunConfig config = load_config(opts);
            fs::create_directories(opts.out_dir);
            write_table(fs::path(opts.out_dir) / "fig4.csv",
                        sqz::make_fig4_table(config, modes, fig4_span, fig4_points));
        } else if (longrun->parsed()) {
            return run_longrun(opts);
        } else if (calibrate->parsed()) {
            return run_calibrate(cal_sqz, cal_anti, opts);
        }
    } catch (const sqz::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

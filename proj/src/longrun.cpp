#include "sqz/longrun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace sqz {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void NoiseProcess::validate() const {
    require(std::isfinite(relative_sigma) && relative_sigma >= 0.0,
            "NoiseProcess: relative_sigma must be >= 0");
    require(std::isfinite(correlation_time_s) && correlation_time_s > 0.0,
            "NoiseProcess: correlation_time must be positive");
    require(std::isfinite(drift_rate_per_hour), "NoiseProcess: non-finite drift rate");
}

double GaussianSampler::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // (0,1] and [0,1) uniforms from the top 53 bits
    const double u1 = 1.0 - (rng_() >> 11) * 0x1.0p-53;
    const double u2 = (rng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

PumpNoise::PumpNoise(const NoiseProcess& process) : process_(process), gauss_(process.seed) {
    process_.validate();
}

double PumpNoise::step(double dt_s) {
    require(dt_s > 0.0, "PumpNoise::step: dt must be positive");
    // exact OU discretization, stationary sigma = relative_sigma
    const double a = std::exp(-dt_s / process_.correlation_time_s);
    value_ = a * value_ + process_.relative_sigma * std::sqrt(1.0 - a * a) * gauss_.next();
    t_ += dt_s;
    return value_ + process_.drift_rate_per_hour * (t_ / 3600.0);
}

void StabilizerLoop::validate() const {
    require(std::isfinite(unity_gain_hz) && unity_gain_hz > 0.0,
            "StabilizerLoop: unity_gain_frequency must be positive");
    require(std::isfinite(actuator_range) && actuator_range > 0.0,
            "StabilizerLoop: actuator_range must be positive");
}

double loop_suppression(double f_hz, const StabilizerLoop& loop) {
    loop.validate();
    if (!loop.enabled) return 1.0;
    if (f_hz <= 0.0) return 0.0;  // integrator: infinite gain at DC
    return 1.0 / (1.0 + loop.unity_gain_hz / f_hz);
}

FilteredBlock loop_residual(std::span<const double> raw_block, const StabilizerLoop& loop,
                            double dt_s) {
    loop.validate();
    require(dt_s > 0.0, "loop_residual: dt must be positive");

    FilteredBlock out;
    const std::size_t n = raw_block.size();
    out.residual.assign(raw_block.begin(), raw_block.end());
    out.correction.assign(n, 0.0);
    if (!loop.enabled || n == 0) return out;

    // Direct real DFT; blocks are short (a minute of samples), so the
    // quadratic cost is irrelevant and any block length works.
    const std::size_t n_half = n / 2;
    std::vector<double> re(n_half + 1, 0.0), im(n_half + 1, 0.0);
    for (std::size_t k = 0; k <= n_half; ++k) {
        const double w = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            re[k] += raw_block[j] * std::cos(w * static_cast<double>(j));
            im[k] -= raw_block[j] * std::sin(w * static_cast<double>(j));
        }
        const double f_k = static_cast<double>(k) / (static_cast<double>(n) * dt_s);
        const double h = loop_suppression(f_k, loop);
        re[k] *= h;
        im[k] *= h;
    }

    for (std::size_t j = 0; j < n; ++j) {
        double acc = re[0];
        for (std::size_t k = 1; k <= n_half; ++k) {
            const double w = 2.0 * kPi * static_cast<double>(k) * static_cast<double>(j) /
                             static_cast<double>(n);
            // the Nyquist bin of an even-length block is not duplicated
            const double scale = (n % 2 == 0 && k == n_half) ? 1.0 : 2.0;
            acc += scale * (re[k] * std::cos(w) - im[k] * std::sin(w));
        }
        out.residual[j] = acc / static_cast<double>(n);
        out.correction[j] = raw_block[j] - out.residual[j];
        if (std::abs(out.correction[j]) > loop.actuator_range) out.saturated = true;
    }
    return out;
}

void LockStateMachine::validate() const {
    require(std::isfinite(lockloss_rate_per_hour) && lockloss_rate_per_hour >= 0.0,
            "LockStateMachine: lockloss_rate must be >= 0");
    require(std::isfinite(reacquisition_time_s) && reacquisition_time_s >= 0.0,
            "LockStateMachine: reacquisition_time must be >= 0");
}

LockStateMachine::State lock_step(LockStateMachine& machine, double dt_s, std::mt19937_64& rng,
                                  bool saturation) {
    machine.validate();
    require(dt_s > 0.0, "lock_step: dt must be positive");

    if (machine.state == LockStateMachine::State::Acquiring) {
        machine.outage_remaining_s -= dt_s;
        if (machine.outage_remaining_s <= 1e-9) {
            machine.outage_remaining_s = 0.0;
            machine.state = LockStateMachine::State::Locked;
        }
    }

    if (machine.state == LockStateMachine::State::Locked) {
        const double rate_per_s = machine.lockloss_rate_per_hour / 3600.0;
        const double p_loss = -std::expm1(-rate_per_s * dt_s);
        const double draw = (rng() >> 11) * 0x1.0p-53;
        if (saturation || draw < p_loss) {
            // the transit through Unlocked is instantaneous: the shutter
            // closes and reacquisition starts within the same step
            machine.state = LockStateMachine::State::Acquiring;
            machine.outage_remaining_s = machine.reacquisition_time_s;
        }
    }
    return machine.state;
}

void SpectrogramConfig::validate() const {
    require(std::isfinite(bin_duration_s) && bin_duration_s > 0.0,
            "SpectrogramConfig: bin_duration must be positive");
    require(std::isfinite(fft_segment_s) && fft_segment_s > 0.0,
            "SpectrogramConfig: fft_segment must be positive");
    require(bin_duration_s >= fft_segment_s,
            "SpectrogramConfig: bin_duration must be >= fft_segment");
    require(frequency_min_hz > 0.0 && frequency_max_hz > frequency_min_hz,
            "SpectrogramConfig: invalid frequency span");
    require(points_per_decade >= 1, "SpectrogramConfig: points_per_decade must be >= 1");
    for (const auto& line : pickup_lines) {
        require(std::isfinite(line.frequency_hz) && line.frequency_hz > 0.0,
                "SpectrogramConfig: pickup line frequency must be positive");
        require(std::isfinite(line.cap_db), "SpectrogramConfig: non-finite pickup cap");
        require(std::isfinite(line.half_width_hz) && line.half_width_hz > 0.0,
                "SpectrogramConfig: pickup half width must be positive");
    }
}

void SimConfig::validate() const {
    cavity.validate();
    opo.validate();
    thermal.validate();
    control.validate();
    noise.validate();
    loop.validate();
    lock.validate();
    spectrogram.validate();
    require(std::isfinite(duration_s) && duration_s >= 0.0,
            "SimConfig: duration must be >= 0");
    require(std::isfinite(dt_s) && dt_s > 0.0, "SimConfig: dt must be positive");
    require(dt_s <= spectrogram.fft_segment_s, "SimConfig: dt must not exceed the fft segment");
    require(timeseries_stride >= 1, "SimConfig: timeseries_stride must be >= 1");
}

namespace {

std::vector<double> build_frequency_grid(const SpectrogramConfig& cfg) {
    std::set<double> grid;
    const double lg_min = std::log10(cfg.frequency_min_hz);
    const double lg_max = std::log10(cfg.frequency_max_hz);
    const int n = static_cast<int>(std::ceil((lg_max - lg_min) * cfg.points_per_decade)) + 1;
    for (int i = 0; i < n; ++i) {
        const double lg = std::min(lg_min + static_cast<double>(i) / cfg.points_per_decade, lg_max);
        grid.insert(std::pow(10.0, lg));
    }
    grid.insert(cfg.frequency_max_hz);
    // make sure narrowband disturbances land on the grid
    for (const auto& line : cfg.pickup_lines)
        if (line.frequency_hz >= cfg.frequency_min_hz && line.frequency_hz <= cfg.frequency_max_hz)
            grid.insert(line.frequency_hz);
    return {grid.begin(), grid.end()};
}

}  // namespace

RunResult run(const SimConfig& config) {
    config.validate();

    RunResult result;
    result.spectrogram.bin_duration_s = config.spectrogram.bin_duration_s;
    result.spectrogram.fft_segment_s = config.spectrogram.fft_segment_s;
    result.spectrogram.frequency_grid_hz = build_frequency_grid(config.spectrogram);
    result.spectrogram.pickup_lines = config.spectrogram.pickup_lines;
    result.stats.duration_s = config.duration_s;

    const auto n_steps = static_cast<std::int64_t>(std::llround(config.duration_s / config.dt_s));
    if (n_steps == 0) return result;  // duty cycle stays 1 by convention

    const double dt = config.dt_s;
    const auto block_len =
        std::max<std::int64_t>(1, std::llround(config.spectrogram.fft_segment_s / dt));
    const auto bin_len =
        std::max<std::int64_t>(1, std::llround(config.spectrogram.bin_duration_s / dt));
    const auto n_bins = (n_steps + bin_len - 1) / bin_len;

    const auto& freqs = result.spectrogram.frequency_grid_hz;
    std::vector<double> kappas(freqs.size());
    const double gamma = decay_rate(config.cavity);
    for (std::size_t j = 0; j < freqs.size(); ++j) kappas[j] = 2.0 * kPi * freqs[j] / gamma;

    std::vector<std::vector<double>> bin_accum(n_bins, std::vector<double>(freqs.size(), 0.0));
    std::vector<std::int64_t> bin_count(n_bins, 0);

    PumpNoise noise(config.noise);
    LockStateMachine machine = config.lock;  // fresh state per run
    machine.state = LockStateMachine::State::Locked;
    machine.outage_remaining_s = 0.0;
    std::mt19937_64 lock_rng(config.noise.seed ^ 0x9e3779b97f4a7c15ull);

    double sum_raw_sq = 0.0, sum_res_sq = 0.0, sum_linear_level = 0.0;
    std::int64_t locked_steps = 0;
    double lock_span_start = 0.0;
    bool was_locked = true;

    std::vector<double> raw_block(static_cast<std::size_t>(block_len));

    for (std::int64_t block_start = 0; block_start < n_steps; block_start += block_len) {
        const auto n_block = std::min<std::int64_t>(block_len, n_steps - block_start);
        raw_block.resize(static_cast<std::size_t>(n_block));
        for (auto& v : raw_block) v = noise.step(dt);
        const FilteredBlock filtered = loop_residual(raw_block, config.loop, dt);

        for (std::int64_t i = 0; i < n_block; ++i) {
            const std::int64_t step = block_start + i;
            const double t = static_cast<double>(step) * dt;
            const double raw = raw_block[static_cast<std::size_t>(i)];
            const double residual = filtered.residual[static_cast<std::size_t>(i)];
            const bool sample_saturated =
                config.loop.enabled &&
                std::abs(filtered.correction[static_cast<std::size_t>(i)]) >
                    config.loop.actuator_range;
            sum_raw_sq += raw * raw;
            sum_res_sq += residual * residual;

            const double pump = config.thermal.set_point_power_w * (1.0 + residual);

            bool chain_ok = true;
            ChainOperatingPoint op;
            try {
                op = chain_operating_point(pump, config.control.readout_mode, config.opo,
                                           config.cavity, config.thermal, config.control);
            } catch (const LockPointLostError&) {
                chain_ok = false;  // loop cannot hold, treated as a lock-loss trigger
            }

            const auto state = lock_step(machine, dt, lock_rng, sample_saturated || !chain_ok);
            const bool locked = state == LockStateMachine::State::Locked;

            if (was_locked && !locked) {
                result.events.push_back({t, "lock_loss"});
                result.stats.n_locklosses += 1;
                result.stats.longest_lock_s =
                    std::max(result.stats.longest_lock_s, t - lock_span_start);
            } else if (!was_locked && locked) {
                result.events.push_back({t, "reacquired"});
                lock_span_start = t;
            }
            was_locked = locked;
            if (locked) locked_steps += 1;

            double level_linear = 1.0;  // shot noise while the shutter is closed
            OpoParams effective = config.opo;
            double relative_angle = 0.0;
            if (locked && chain_ok) {
                effective.pump_ratio = op.effective_pump_ratio;
                relative_angle = op.relative_angle();
                const VariancePair v0 = quadrature_variances(effective, 0.0);
                const SqueezingEllipse e0{v0.sqz, v0.anti, op.ellipse_angle};
                level_linear = rotate_readout(e0, relative_angle).sqz;
            }
            sum_linear_level += level_linear;

            const std::int64_t bin = step / bin_len;
            if (step - bin * bin_len < block_len) {  // inside the bin's data window
                auto& acc = bin_accum[static_cast<std::size_t>(bin)];
                if (locked && chain_ok) {
                    for (std::size_t j = 0; j < freqs.size(); ++j) {
                        const VariancePair vj = quadrature_variances(effective, kappas[j]);
                        const SqueezingEllipse ej{vj.sqz, vj.anti, op.ellipse_angle};
                        acc[j] += rotate_readout(ej, relative_angle).sqz;
                    }
                } else {
                    for (std::size_t j = 0; j < freqs.size(); ++j) acc[j] += 1.0;
                }
                bin_count[static_cast<std::size_t>(bin)] += 1;
            }

            if (step % config.timeseries_stride == 0) {
                result.timeseries.push_back({t, raw, residual,
                                             locked && chain_ok ? op.detuning_hz : 0.0,
                                             10.0 * std::log10(level_linear), locked});
            }
        }
    }

    if (was_locked) {
        result.stats.longest_lock_s = std::max(
            result.stats.longest_lock_s, static_cast<double>(n_steps) * dt - lock_span_start);
    }

    result.spectrogram.time_bins_s.reserve(static_cast<std::size_t>(n_bins));
    result.spectrogram.values_db.reserve(static_cast<std::size_t>(n_bins));
    for (std::int64_t b = 0; b < n_bins; ++b) {
        result.spectrogram.time_bins_s.push_back(static_cast<double>(b * bin_len) * dt);
        std::vector<double> row(freqs.size(), 0.0);
        for (std::size_t j = 0; j < freqs.size(); ++j) {
            const double mean_linear =
                bin_accum[static_cast<std::size_t>(b)][j] /
                static_cast<double>(std::max<std::int64_t>(1, bin_count[static_cast<std::size_t>(b)]));
            double db = 10.0 * std::log10(mean_linear);
            for (const auto& line : config.spectrogram.pickup_lines) {
                if (std::abs(freqs[j] - line.frequency_hz) <= line.half_width_hz)
                    db = std::max(db, -line.cap_db);
            }
            row[j] = db;
        }
        result.spectrogram.values_db.push_back(std::move(row));
    }

    const double total = static_cast<double>(n_steps);
    result.stats.duty_cycle = static_cast<double>(locked_steps) / total;
    result.stats.locked_time_s = static_cast<double>(locked_steps) * dt;
    result.stats.mean_squeezing_db = 10.0 * std::log10(sum_linear_level / total);
    result.stats.raw_deviation_rms = std::sqrt(sum_raw_sq / total);
    result.stats.residual_deviation_rms = std::sqrt(sum_res_sq / total);
    return result;
}

}  // namespace sqz

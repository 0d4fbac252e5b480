// Time-domain simulation of long-term source operation: pump-power noise,
// the Mach-Zehnder power stabilization loop, the lock/reacquisition state
// machine, and the squeezing spectrogram with duty-cycle statistics.
//
// A run is fully deterministic for a given configuration (seed included).
// Pump noise is an Ornstein-Uhlenbeck process plus a slow linear drift; the
// stabilizer is applied block-wise in the frequency domain with the
// single-integrator suppression 1/(1 + f_ug/f).

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sqz/control.hpp"

namespace sqz {

struct NoiseProcess {
    double relative_sigma = 0.015;      // stationary RMS of fractional pump fluctuation
    double correlation_time_s = 300.0;
    double drift_rate_per_hour = 0.002; // slow fractional ramp (alignment degradation)
    std::uint64_t seed = 1;

    void validate() const;
};

// Seeded Gaussian stream (Box-Muller over mt19937_64), bit-stable across
// platforms and library versions.
class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
    double next();

  private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stateful noise generator; step() advances time by dt and returns the
// fractional pump deviation (OU value plus accumulated drift).
class PumpNoise {
  public:
    explicit PumpNoise(const NoiseProcess& process);
    double step(double dt_s);
    double elapsed_s() const { return t_; }

  private:
    NoiseProcess process_;
    GaussianSampler gauss_;
    double value_ = 0.0;  // OU state
    double t_ = 0.0;
};

struct StabilizerLoop {
    double unity_gain_hz = 1000.0;
    bool enabled = true;
    double actuator_range = 0.3;  // max fractional power correction before saturation

    void validate() const;
};

// |1/(1+G)| with |G(f)| = f_ug/f. Zero at DC, 0.5 at the unity-gain
// frequency, 1 when the loop is disabled.
double loop_suppression(double f_hz, const StabilizerLoop& loop);

struct FilteredBlock {
    std::vector<double> residual;     // deviation after loop suppression
    std::vector<double> correction;   // raw - residual, what the actuator applied
    bool saturated = false;           // any |correction| > actuator_range
};

// Applies the loop suppression to one block of deviation samples in the
// frequency domain (direct DFT; blocks are short). A disabled loop passes
// the input through.
FilteredBlock loop_residual(std::span<const double> raw_block, const StabilizerLoop& loop,
                            double dt_s);

struct LockStateMachine {
    enum class State { Locked, Unlocked, Acquiring };

    State state = State::Locked;
    double lockloss_rate_per_hour = 0.4;  // exogenous Poisson loss rate
    double reacquisition_time_s = 15.0;
    double outage_remaining_s = 0.0;

    void validate() const;
};

// Advances the machine by dt. A Poisson event or a saturation trigger drops
// the lock; the Unlocked state decays into Acquiring immediately, and the
// lock is restored after exactly reacquisition_time of outage.
LockStateMachine::State lock_step(LockStateMachine& machine, double dt_s, std::mt19937_64& rng,
                                  bool saturation);

struct PickupLine {
    double frequency_hz = 6000.0;
    double cap_db = 7.0;         // squeezing magnitude is capped at this value
    double half_width_hz = 100.0;
};

struct SpectrogramConfig {
    double bin_duration_s = 900.0;
    double fft_segment_s = 60.0;   // data window evaluated per time bin
    double frequency_min_hz = 10.0;
    double frequency_max_hz = 10.0e3;
    int points_per_decade = 10;
    std::vector<PickupLine> pickup_lines{PickupLine{}};

    void validate() const;
};

// Time x frequency matrix of emitted noise levels in dB relative to shot
// noise (negative = squeezing, 0 = shot noise while unlocked).
struct Spectrogram {
    double bin_duration_s = 0.0;
    double fft_segment_s = 0.0;
    std::vector<double> time_bins_s;        // bin start times
    std::vector<double> frequency_grid_hz;  // log grid plus pickup-line frequencies
    std::vector<std::vector<double>> values_db;  // [time bin][frequency]
    std::vector<PickupLine> pickup_lines;
};

struct RunStats {
    double duty_cycle = 1.0;
    int n_locklosses = 0;
    double longest_lock_s = 0.0;
    double mean_squeezing_db = 0.0;       // time-averaged emitted level, dB
    double raw_deviation_rms = 0.0;       // fractional pump deviation before the loop
    double residual_deviation_rms = 0.0;  // after the loop
    double locked_time_s = 0.0;
    double duration_s = 0.0;
};

struct LockEvent {
    double time_s = 0.0;
    std::string kind;  // "lock_loss" or "reacquired"
};

struct TimeSample {
    double time_s = 0.0;
    double raw_deviation = 0.0;
    double residual_deviation = 0.0;
    double detuning_hz = 0.0;
    double level_db = 0.0;  // emitted level at the audio-band limit
    bool locked = true;
};

struct SimConfig {
    CavityParams cavity = CavityParams::from_power(0.10, 0.005, 0.4);
    OpoParams opo;
    ThermalCoupling thermal{3.0e6 / 3.45e-3, 0.035};
    ControlConfig control;
    NoiseProcess noise;
    StabilizerLoop loop;
    LockStateMachine lock;
    SpectrogramConfig spectrogram;
    double duration_s = 72000.0;  // 20 h
    double dt_s = 1.0;
    int timeseries_stride = 60;   // emit every n-th sample

    void validate() const;
};

struct RunResult {
    Spectrogram spectrogram;
    RunStats stats;
    std::vector<TimeSample> timeseries;
    std::vector<LockEvent> events;
};

// Runs the full simulation. Deterministic: identical config gives identical
// results. A zero-duration run returns an empty spectrogram with duty
// cycle 1 by convention.
RunResult run(const SimConfig& config);

}  // namespace sqz

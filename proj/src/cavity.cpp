#include "sqz/cavity.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sqz {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("CavityParams: " + what);
}

// Maps atan2 output onto (-pi, pi].
double principal_value(double phase) {
    double p = std::remainder(phase, 2.0 * kPi);
    if (p <= -kPi) p += 2.0 * kPi;
    return p;
}

}  // namespace

CavityParams CavityParams::from_power(double output_transmittance,
                                      double intracavity_loss,
                                      double roundtrip_length) {
    CavityParams c;
    c.output_transmittance = output_transmittance;
    c.intracavity_loss = intracavity_loss;
    c.roundtrip_length = roundtrip_length;
    c.rho1 = std::exp(-0.5 * output_transmittance);
    c.tau1 = std::sqrt(1.0 - c.rho1 * c.rho1);
    c.rho2 = std::exp(-0.5 * intracavity_loss);
    c.tau2 = std::sqrt(1.0 - c.rho2 * c.rho2);
    c.validate();
    return c;
}

void CavityParams::validate() const {
    require(std::isfinite(rho1) && std::isfinite(rho2) && std::isfinite(tau1) &&
                std::isfinite(tau2) && std::isfinite(roundtrip_length) &&
                std::isfinite(intracavity_loss) && std::isfinite(output_transmittance),
            "non-finite parameter");
    require(rho1 > 0.0 && rho1 < 1.0, "rho1 outside (0, 1)");
    require(rho2 > 0.0 && rho2 <= 1.0, "rho2 outside (0, 1]");  // 1 = lossless back mirror
    require(tau1 >= 0.0 && tau1 < 1.0, "tau1 outside [0, 1)");
    require(tau2 >= 0.0 && tau2 < 1.0, "tau2 outside [0, 1)");
    // equality = lossless mirror; allow a little headroom for rounding
    require(rho1 * rho1 + tau1 * tau1 <= 1.0 + 1e-12, "mirror 1 violates rho^2 + tau^2 <= 1");
    require(rho2 * rho2 + tau2 * tau2 <= 1.0 + 1e-12, "mirror 2 violates rho^2 + tau^2 <= 1");
    require(roundtrip_length > 0.0, "roundtrip_length must be positive");
    require(intracavity_loss >= 0.0 && intracavity_loss < 1.0, "loss outside [0, 1)");
    require(output_transmittance > 0.0 && output_transmittance < 1.0,
            "output transmittance outside (0, 1)");
    const double rr = rho1 * rho2;
    require(rr < 1.0 && std::isfinite(finesse()) && finesse() > 0.0, "finesse not finite positive");
}

double CavityParams::finesse() const {
    const double rr = rho1 * rho2;
    return kPi * std::sqrt(rr) / (1.0 - rr);
}

double CavityParams::roundtrip_phase(double f_hz) const {
    return 2.0 * kPi * f_hz * roundtrip_length / kSpeedOfLight;
}

double transmission_phase(double f_hz, const CavityParams& cavity) {
    if (!std::isfinite(f_hz)) throw std::invalid_argument("transmission_phase: non-finite frequency");
    const double theta = cavity.roundtrip_phase(f_hz);
    // tau1*tau2 is a positive scalar and does not contribute to the argument.
    const std::complex<double> den = 1.0 - cavity.roundtrip_amplitude() * std::polar(1.0, theta);
    return principal_value(theta - std::arg(den));
}

double airy_buildup(double f_hz, const CavityParams& cavity) {
    const double rr = cavity.roundtrip_amplitude();
    const double theta = cavity.roundtrip_phase(f_hz);
    const double re = 1.0 - rr * std::cos(theta);
    const double im = rr * std::sin(theta);
    const double num = (1.0 - rr) * (1.0 - rr);
    return num / (re * re + im * im);
}

double decay_rate(const CavityParams& cavity) {
    cavity.validate();
    return kSpeedOfLight * (cavity.output_transmittance + cavity.intracavity_loss) /
           cavity.roundtrip_length;
}

double normalized_frequency(double f_hz, const CavityParams& cavity) {
    return 2.0 * kPi * f_hz / decay_rate(cavity);
}

void unwrap_phase(std::span<double> phases) {
    for (std::size_t i = 1; i < phases.size(); ++i) {
        double step = phases[i] - phases[i - 1];
        step -= 2.0 * kPi * std::round(step / (2.0 * kPi));
        phases[i] = phases[i - 1] + step;
    }
}

}  // namespace sqz

#include "qpt/dicke_effective.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "qpt/errors.hpp"

namespace qpt::dicke {

const char* to_string(Phase phase) { return phase == Phase::Normal ? "normal" : "superradiant"; }

void DickeParams::validate() const {
    if (!(omega > 0) || !std::isfinite(omega)) throw InputError("omega must be positive and finite");
    if (!(omega0 > 0) || !std::isfinite(omega0)) throw InputError("omega0 must be positive and finite");
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw InputError("lambda must be non-negative and finite");
}

double DickeParams::lambda_c() const { return critical_coupling(omega, omega0); }

Phase DickeParams::phase() const { return lambda <= lambda_c() ? Phase::Normal : Phase::SuperRadiant; }

double critical_coupling(double omega, double omega0) {
    if (!(omega > 0) || !(omega0 > 0)) throw InputError("frequencies must be positive");
    return 0.5 * std::sqrt(omega * omega0);
}

ModeSpectrum mode_energies(const DickeParams& params) {
    params.validate();
    const double w = params.omega, w0 = params.omega0, lam = params.lambda;
    const double lc = params.lambda_c();
    ModeSpectrum out{};
    out.phase = params.phase();

    // e1^2 e2^2 is the determinant of the quadratic form; forming e1^2 as
    // det / e2^2 avoids the cancellation in the difference formula near lambda_c.
    if (out.phase == Phase::Normal) {
        const double trace = w * w + w0 * w0;
        const double disc = std::sqrt((w0 * w0 - w * w) * (w0 * w0 - w * w) + 16.0 * lam * lam * w * w0);
        const double e2sq = 0.5 * (trace + disc);
        const double det = 4.0 * w * w0 * (lc - lam) * (lc + lam);
        out.e2 = std::sqrt(e2sq);
        out.e1 = std::sqrt(std::max(det, 0.0) / e2sq);
        out.gamma_angle = 0.5 * std::atan(4.0 * lam * std::sqrt(w * w0) / trace);
    } else {
        const double mu = w * w0 / (4.0 * lam * lam);
        const double b = w0 * w0 / (mu * mu);
        const double trace = w * w + b;
        const double disc = std::sqrt((b - w * w) * (b - w * w) + 4.0 * w * w * w0 * w0);
        const double e2sq = 0.5 * (trace + disc);
        const double lc2 = lc * lc, lam2 = lam * lam;
        const double det = w * w * w0 * w0 * (lam2 - lc2) * (lam2 + lc2) / (lc2 * lc2);
        out.e2 = std::sqrt(e2sq);
        out.e1 = std::sqrt(std::max(det, 0.0) / e2sq);
        out.mu = mu;
        out.gamma_angle = 0.5 * std::atan(2.0 * w * w0 * mu * mu / (w0 * w0 + mu * mu * w * w));
    }
    return out;
}

double near_critical_gap(const DickeParams& params) {
    params.validate();
    const double lc = params.lambda_c();
    if (params.lambda > lc) throw DomainError("near-critical gap formula applies to the normal phase only");
    const double w = params.omega, w0 = params.omega0;
    return std::sqrt(8.0 * lc * (lc - params.lambda) * w * w0 / (w0 * w0 + w * w));
}

ScalingPair scaling_eta(double lambda1, double lambda2, double lambda_c) {
    if (lambda1 == lambda_c || lambda2 == lambda_c)
        throw InputError("scaling ratio undefined with a coupling at the critical point");
    const double eta = (lambda1 - lambda_c) / (lambda2 - lambda_c);
    if (!(eta > 0))
        throw CrossPhaseError("couplings " + std::to_string(lambda1) + " and " + std::to_string(lambda2) +
                              " lie on opposite sides of lambda_c = " + std::to_string(lambda_c));
    return {lambda1, lambda2, lambda_c, eta, 0.5};
}

namespace {

Eigen::Matrix2d gaussian_form(const ModeSpectrum& s) {
    const double c = std::cos(s.gamma_angle), sn = std::sin(s.gamma_angle);
    Eigen::Matrix2d u;
    u << c, -sn, sn, c;
    return u.transpose() * Eigen::Vector2d(s.e1, s.e2).asDiagonal() * u;
}

}  // namespace

double fidelity_gaussian(const DickeParams& p1, const DickeParams& p2, MixingConvention convention) {
    p1.validate();
    p2.validate();
    if (p1.omega != p2.omega || p1.omega0 != p2.omega0)
        throw InputError("fidelity requires identical omega and omega0 for both couplings");
    if (p1.lambda == p2.lambda) return 1.0;
    const double lc = p1.lambda_c();
    if (p1.lambda == lc || p2.lambda == lc) return 0.0;
    if ((p1.lambda < lc) != (p2.lambda < lc))
        throw CrossPhaseError("couplings " + std::to_string(p1.lambda) + " and " + std::to_string(p2.lambda) +
                              " lie on opposite sides of lambda_c");

    const ModeSpectrum s1 = mode_energies(p1);
    const ModeSpectrum s2 = mode_energies(p2);

    if (convention == MixingConvention::Common) {
        const double det_ratio = (s2.e1 * s2.e2) / (s1.e1 * s1.e2);
        const double trace = s2.e1 / s1.e1 + s2.e2 / s1.e2;
        return 2.0 * std::pow(det_ratio, 0.25) / std::sqrt(1.0 + trace + det_ratio);
    }
    // Symmetric form of the same expression: det(1 + A1^-1 A2) det A1 = det(A1 + A2).
    const Eigen::Matrix2d a1 = gaussian_form(s1);
    const Eigen::Matrix2d a2 = gaussian_form(s2);
    return 2.0 * std::pow(a1.determinant() * a2.determinant(), 0.25) / std::sqrt((a1 + a2).determinant());
}

double fidelity_scaling(double eta) {
    if (!(eta > 0) || !std::isfinite(eta)) throw InputError("eta must be positive and finite");
    if (eta == 1.0) return 1.0;
    return std::sqrt(2.0) * std::pow(eta, 0.125) / std::sqrt(std::sqrt(eta) + 1.0);
}

squeeze::SqueezeMap zero_mode_map(const DickeParams& p1, const DickeParams& p2) {
    const ModeSpectrum s1 = mode_energies(p1);
    const ModeSpectrum s2 = mode_energies(p2);
    if (!(s1.e1 > 0) || !(s2.e1 > 0)) throw DomainError("soft mode is gapless at the critical point");
    return squeeze::SqueezeMap::from_r(0.5 * std::log(s1.e1 / s2.e1));
}

squeeze::SqueezeMap scaling_map(double eta) {
    if (!(eta > 0) || !std::isfinite(eta)) throw InputError("eta must be positive and finite");
    return squeeze::SqueezeMap::from_r(0.25 * std::log(eta));
}

}  // namespace qpt::dicke

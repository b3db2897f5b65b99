#pragma once

#include <optional>
#include <vector>

#include "qpt/squeeze.hpp"

namespace qpt::dicke {

enum class Phase { Normal, SuperRadiant };

const char* to_string(Phase phase);

/// Dicke model couplings (hbar = 1).
struct DickeParams {
    double omega;   // boson frequency
    double omega0;  // atomic splitting
    double lambda;  // atom-field coupling

    /// Throws InputError unless omega, omega0 > 0 and lambda >= 0.
    void validate() const;
    double lambda_c() const;
    Phase phase() const;  // Normal for lambda <= lambda_c
};

/// lambda_c = sqrt(omega omega0) / 2
double critical_coupling(double omega, double omega0);

/// Thermodynamic-limit normal modes of the Dicke model.
struct ModeSpectrum {
    double e1;  // soft mode, vanishes at lambda_c
    double e2;
    Phase phase;
    std::optional<double> mu;  // omega omega0 / (4 lambda^2), super-radiant branch only
    double gamma_angle;        // mixing angle of the two modes
};

ModeSpectrum mode_energies(const DickeParams& params);

/// e1 ~ [8 lambda_c (lambda_c - lambda) omega omega0 / (omega0^2 + omega^2)]^{1/2};
/// normal phase only.
double near_critical_gap(const DickeParams& params);

/// Scaling ratio of two couplings on the same side of lambda_c.
struct ScalingPair {
    double lambda1;
    double lambda2;
    double lambda_c;
    double eta;
    double phi = 0.5;  // critical exponent of the soft-mode gap
};

ScalingPair scaling_eta(double lambda1, double lambda2, double lambda_c);

enum class MixingConvention {
    /// Each coupling rotated by its own mixing angle (general reading).
    PerCoupling,
    /// One rotation shared by both couplings; the determinant collapses to
    /// the trace identity and only the mode energies matter.
    Common,
};

/// Overlap of the two Gaussian ground states of the effective two-mode
/// Hamiltonian,
///   L_p = 2 [det A2 / det A1]^{1/4} / [det(1 + A1^{-1} A2)]^{1/2}.
/// Returns 0 when either coupling sits exactly at lambda_c.
double fidelity_gaussian(const DickeParams& p1, const DickeParams& p2,
                         MixingConvention convention = MixingConvention::PerCoupling);

/// L_p = sqrt(2) eta^{1/8} / sqrt(sqrt(eta) + 1)
double fidelity_scaling(double eta);

/// Squeeze map relating the soft-mode vacua at two couplings,
/// tanh r = (e1(lambda1) - e1(lambda2)) / (e1(lambda1) + e1(lambda2)).
squeeze::SqueezeMap zero_mode_map(const DickeParams& p1, const DickeParams& p2);

/// Map realising the asymptotic scaling relation
/// tanh r = (sqrt(eta) - 1) / (sqrt(eta) + 1), i.e. r = ln(eta) / 4.
squeeze::SqueezeMap scaling_map(double eta);

}  // namespace qpt::dicke

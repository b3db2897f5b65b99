#pragma once

#include <span>

#include "qpt/echo.hpp"
#include "qpt/squeeze.hpp"

namespace qpt::lmg {

enum class Phase { Symmetric, Broken, Critical };

const char* to_string(Phase phase);

/// Anisotropic LMG model in a transverse field h, 0 <= gamma < 1.
struct LmgParams {
    double gamma;
    double h;

    /// Throws InputError outside 0 <= gamma < 1, h > 0, and, for h < 1,
    /// outside h^2 > gamma.
    void validate() const;
    Phase phase() const;
};

/// Holstein-Primakoff mode: gap and Bogoliubov angle.
struct LmgMode {
    double delta;
    double theta;  // +inf at h = 1
};

/// Symmetric phase: Delta = 2 sqrt((h-1)(h-gamma)), tanh Theta = (1-gamma)/(2h-1-gamma).
/// Broken phase:    Delta = 2 sqrt((1-h^2)(1-gamma)), tanh Theta = (h^2-gamma)/(2-h^2-gamma).
LmgMode gap_angle(const LmgParams& params);

/// L_p = [1 - tanh^2((Theta2 - Theta1)/2)]^{1/4}; 0 if exactly one field is
/// critical, 1 if both are.
double fidelity_lmg(double gamma, double h1, double h2);

/// eta = (h1 - 1)/(h2 - 1); CrossPhaseError if the fields straddle h = 1.
double eta_lmg(double h1, double h2);

/// Squeeze map between the vacua at h1 and h2.
squeeze::SqueezeMap lmg_map(double gamma, double h1, double h2);

/// Single-mode echo of the h2 vacuum evolving under h1, with tau = Delta(h1) t.
/// In the broken phase the same construction is applied to its own mode
/// quantities; such series carry an "extrapolated" flag in their metadata.
echo::EchoSeries echo_lmg(double gamma, double h1, double h2, std::span<const double> t_grid);

}  // namespace qpt::lmg

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpt/squeeze.hpp"

namespace qpt::echo {

using Provenance = std::vector<std::pair<std::string, std::string>>;

/// Which pair of control parameters produced a series. For the Dicke model
/// these are (lambda1, lambda2) with critical = lambda_c; for LMG (h1, h2)
/// with critical = 1.
struct EchoSource {
    std::string model;
    double param1 = 0;
    double param2 = 0;
    double critical = 0;

    double distance2() const;  // |param2 - critical|
};

/// Loschmidt echo M_L(t) sampled on an ascending grid starting at 0, together
/// with the rescaled grid tau = omega1 t.
struct EchoSeries {
    std::vector<double> t;
    std::vector<double> tau;
    std::vector<double> M;
    double omega1 = 1.0;
    std::optional<double> period;  // in units of t
    EchoSource source;
    Provenance meta;
    std::vector<std::string> warnings;

    /// Throws InputError if a structural invariant is broken.
    void validate() const;
    bool covers_period() const;
};

/// Validates a time grid: non-empty, starts at 0, strictly ascending.
void check_time_grid(std::span<const double> t_grid);

/// `samples` equally spaced points on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t samples);

/// Closed-form single-mode survival probability
///   M = (1 - q^2) / sqrt(1 - 2 q^2 cos(2 delta1 t) + q^4),  q = tanh r,
/// i.e. the resummed echo of the squeezed vacuum whose |2n> component
/// advances in phase as 2 n delta1 t.
EchoSeries survival_closed(const squeeze::SqueezeMap& map, double delta1, std::span<const double> t_grid);

/// Gaussian-then-power-law envelope
///   M(t) = b0 (1 + xi^2 t^2)^{-1/2} exp(-Gamma t^2 / (1 + xi^2 t^2)).
struct SemiclassicalParams {
    double gamma = 0;  // Gaussian rate, time^-2
    double xi = 0;     // crossover rate, time^-1
    double b0 = 1;

    double rescaled_gamma(double omega1) const { return gamma / (omega1 * omega1); }
    double rescaled_xi(double omega1) const { return xi / omega1; }
};

double semiclassical_envelope(const SemiclassicalParams& params, double t);

struct EnvelopeFit {
    SemiclassicalParams params;
    double max_log_residual = 0;  // max |ln M_fit - ln M| over the window
    double rms_log_residual = 0;
    std::size_t samples = 0;
    int iterations = 0;
};

/// Least squares on ln M over samples with t in [t_lo, t_hi]; b0 is kept in
/// (0, 1.2], gamma and xi non-negative.
EnvelopeFit fit_envelope(const EchoSeries& series, double t_lo, double t_hi);

/// Replace tau by omega1 t; M untouched.
EchoSeries rescale_time(EchoSeries series, double omega1);

struct EchoMinimum {
    double value;
    double t;
};

/// Global minimum over the grid, refined by a parabola through the three
/// samples around it. The series must span one full period.
EchoMinimum min_echo(const EchoSeries& series);

/// M_p = 2 sqrt(eta) / (1 + eta)
double mp_scaling(double eta);

struct CollapseGroup {
    double eta;
    std::vector<EchoSeries> series;
};

struct CollapseMember {
    double param1;
    double param2;
    double distance2;
};

struct GroupReport {
    double eta;
    std::vector<CollapseMember> members;  // ordered by distance2, largest first
    std::vector<double> tau;              // common grid
    double spread = 0;                    // max over tau of (max M - min M)
    std::vector<double> adjacent_spreads; // between consecutive members
    bool spread_decreasing = true;        // adjacent spreads shrink as distance2 -> 0
    double interpolation_bound = 0;       // h^2/8 max|M''| over the members
};

struct CollapseReport {
    std::vector<GroupReport> groups;
};

/// Linear interpolation of every series of a group onto the part of its
/// first member's tau grid covered by all members.
CollapseReport collapse_check(std::span<const CollapseGroup> groups);

/// Linear interpolation of (x, y) at `at`; x ascending, `at` inside the range.
double interpolate(std::span<const double> x, std::span<const double> y, double at);

}  // namespace qpt::echo

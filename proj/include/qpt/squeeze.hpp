#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qpt::squeeze {

/// Default cap on |r|; cosh(20) ~ 2.4e8.
inline constexpr double kSqueezeCap = 20.0;

/// Single-mode Bogoliubov relation between two ground-state bases,
///   c^dag(1) = P11 c^dag(2) + Q11 c(2),  P11 = cosh r, Q11 = sinh r.
/// Only metric quantities are computed, so both phases are zero.
class SqueezeMap {
public:
    /// Map with squeeze parameter r.
    static SqueezeMap from_r(double r);
    /// Map whose expansion parameter tanh r equals `q` (|q| < 1).
    static SqueezeMap from_tanh(double q);

    double r() const { return r_; }
    double p11() const { return p11_; }
    double q11() const { return q11_; }
    double tanh_r() const;
    double theta_c() const { return 0.0; }
    double theta_r() const { return 0.0; }

private:
    explicit SqueezeMap(double r);
    double r_;
    double p11_;
    double q11_;
};

/// r = (theta2 - theta1) / 2 for two Bogoliubov angles.
SqueezeMap relative_map(double theta1, double theta2);

/// Amplitudes of |0_2> on the even number states |2n_1>.
struct GroundExpansion {
    std::vector<double> amplitudes;  // a_{2n}, n = 0..n_max
    std::size_t n_max;
    double tail_bound;  // upper bound on the discarded sum of a_{2n}^2
};

GroundExpansion ground_expansion(const SqueezeMap& map, std::size_t n_max, double r_cap = kSqueezeCap);

/// Smallest n_max whose tail bound is <= tol.
std::size_t expansion_order_for(const SqueezeMap& map, double tol);

/// L_p = (1 - tanh^2 r)^{1/4}
double fidelity(const SqueezeMap& map);

/// C_nm = |<n_1|m_2>| for n <= n_max, m <= m_max, from the three-term
/// recursion implied by the Bogoliubov relation. Column 0 is normalised by
/// direct summation; every column must hold at least 1 - column_tol of its
/// weight inside the truncation, otherwise NumericError names the column.
Eigen::MatrixXd overlap_matrix(const SqueezeMap& map, std::size_t n_max, std::size_t m_max,
                               double column_tol = 1e-10);

/// chi = 1 / sum_n C_nm^4 for the eigenstate |m_2>.
double participation_ratio(const SqueezeMap& map, std::size_t m, std::size_t n_max);

}  // namespace qpt::squeeze

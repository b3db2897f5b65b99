#include "qpt/squeeze.hpp"

#include <cmath>
#include <string>

#include "qpt/errors.hpp"

namespace qpt::squeeze {

SqueezeMap::SqueezeMap(double r) : r_(r), p11_(std::cosh(r)), q11_(std::sinh(r)) {}

SqueezeMap SqueezeMap::from_r(double r) {
    if (!std::isfinite(r)) throw InputError("squeeze parameter must be finite");
    return SqueezeMap(r);
}

SqueezeMap SqueezeMap::from_tanh(double q) {
    if (!(std::abs(q) < 1.0)) throw InputError("expansion parameter tanh r must satisfy |q| < 1");
    return SqueezeMap(std::atanh(q));
}

double SqueezeMap::tanh_r() const { return std::tanh(r_); }

SqueezeMap relative_map(double theta1, double theta2) {
    if (!std::isfinite(theta1) || !std::isfinite(theta2))
        throw InputError("Bogoliubov angles must be finite");
    return SqueezeMap::from_r((theta2 - theta1) / 2.0);
}

namespace {

// 1 - tanh^2 r without cancellation.
double one_minus_q2(const SqueezeMap& map) {
    const double c = std::cosh(map.r());
    return 1.0 / (c * c);
}

}  // namespace

GroundExpansion ground_expansion(const SqueezeMap& map, std::size_t n_max, double r_cap) {
    if (std::abs(map.r()) >= r_cap)
        throw DomainError("|r| = " + std::to_string(std::abs(map.r())) + " exceeds the squeeze cap " +
                          std::to_string(r_cap) + "; refine the parameter step");
    const double q = map.tanh_r();
    GroundExpansion out;
    out.n_max = n_max;
    out.amplitudes.resize(n_max + 1);
    out.amplitudes[0] = 1.0 / std::sqrt(std::cosh(map.r()));
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double ratio = static_cast<double>(2 * n - 1) / static_cast<double>(2 * n);
        out.amplitudes[n] = out.amplitudes[n - 1] * std::sqrt(ratio) * q;
    }
    const double last = out.amplitudes[n_max];
    out.tail_bound = last * last * q * q / one_minus_q2(map);
    return out;
}

std::size_t expansion_order_for(const SqueezeMap& map, double tol) {
    const double q2 = map.tanh_r() * map.tanh_r();
    if (q2 == 0.0) return 0;
    const double denom = one_minus_q2(map);
    double a2 = 1.0 / std::cosh(map.r());
    std::size_t n = 0;
    while (a2 * q2 / denom > tol) {
        ++n;
        a2 *= q2 * static_cast<double>(2 * n - 1) / static_cast<double>(2 * n);
        if (n > 100000000) throw NumericError("expansion order search did not terminate");
    }
    return n;
}

double fidelity(const SqueezeMap& map) { return 1.0 / std::sqrt(std::cosh(map.r())); }

Eigen::MatrixXd overlap_matrix(const SqueezeMap& map, std::size_t n_max, std::size_t m_max, double column_tol) {
    const auto rows = static_cast<Eigen::Index>(n_max + 1);
    const auto cols = static_cast<Eigen::Index>(m_max + 1);
    const double p = map.p11();
    const double q = map.q11();
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(rows, cols);

    // Column 0 from <n_1| c(1) |0_2> relations, seeded with 1 and normalised.
    u(0, 0) = 1.0;
    for (Eigen::Index n = 1; n + 1 < rows; n += 2) {
        const double nn = static_cast<double>(n);
        u(n + 1, 0) = (q / p) * std::sqrt(nn / (nn + 1.0)) * u(n - 1, 0);
    }
    const double norm0 = u.col(0).norm();
    u.col(0) /= norm0;
    {
        const double last = u(rows - 1 - ((rows - 1) % 2), 0);
        const double t2 = std::tanh(map.r()) * std::tanh(map.r());
        const double tail = t2 < 1.0 ? last * last * t2 / one_minus_q2(map) : INFINITY;
        if (tail > column_tol)
            throw NumericError("overlap column 0 not converged at n_max = " + std::to_string(n_max) +
                               " (tail estimate " + std::to_string(tail) + ")");
    }

    // sqrt(n) U(n-1, m) = P sqrt(m+1) U(n, m+1) + Q sqrt(m) U(n, m-1)
    for (Eigen::Index m = 0; m + 1 < cols; ++m) {
        const double mm = static_cast<double>(m);
        for (Eigen::Index n = 0; n < rows; ++n) {
            if ((n + m + 1) % 2 != 0) continue;
            const double down = n > 0 ? std::sqrt(static_cast<double>(n)) * u(n - 1, m) : 0.0;
            const double side = m > 0 ? q * std::sqrt(mm) * u(n, m - 1) : 0.0;
            u(n, m + 1) = (down - side) / (p * std::sqrt(mm + 1.0));
        }
    }

    for (Eigen::Index m = 0; m < cols; ++m) {
        const double weight = u.col(m).squaredNorm();
        if (weight < 1.0 - column_tol || weight > 1.0 + 1e-9)
            throw NumericError("overlap column " + std::to_string(m) + " holds weight " + std::to_string(weight) +
                               " inside n_max = " + std::to_string(n_max));
    }
    return u.cwiseAbs();
}

double participation_ratio(const SqueezeMap& map, std::size_t m, std::size_t n_max) {
    const Eigen::MatrixXd c = overlap_matrix(map, n_max, m, 1e-10);
    return 1.0 / c.col(static_cast<Eigen::Index>(m)).array().pow(4).sum();
}

}  // namespace qpt::squeeze

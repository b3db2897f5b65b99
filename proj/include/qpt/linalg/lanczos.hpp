#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "qpt/linalg/eigh.hpp"

namespace qpt::linalg {

struct LanczosOptions {
    Index max_iterations = 2000;
    Index check_every = 5;
    int max_restarts = 8;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

template <typename Scalar>
struct GroundPair {
    Scalar energy;
    Vector<Scalar> vector;
    Scalar residual;        // ||A v - E v||
    Scalar norm_estimate;   // max |Ritz value|
    Index iterations;
    int restarts;
};

namespace detail {

template <typename Scalar>
Vector<Scalar> random_unit(Index dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Vector<Scalar> v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = Scalar(uniform(rng));
    return v.normalized();
}

/// Two passes of classical Gram-Schmidt against the first `count` columns.
template <typename Scalar>
void orthogonalize(const Matrix<Scalar>& basis, Index count, Vector<Scalar>& w) {
    if (count == 0) return;
    for (int pass = 0; pass < 2; ++pass) {
        const Vector<Scalar> overlap = basis.leftCols(count).transpose() * w;
        w.noalias() -= basis.leftCols(count) * overlap;
    }
}

template <typename Scalar>
void fix_sign(Vector<Scalar>& v) {
    Index lead = 0;
    v.cwiseAbs().maxCoeff(&lead);
    if (v(lead) < 0) v = -v;
}

}  // namespace detail

/// Lowest eigenpair of a symmetric operator given only as `apply(x, y)`
/// computing y = A x. Lanczos with full reorthogonalisation; on an exact
/// breakdown the Krylov space is extended with a fresh random direction
/// orthogonal to everything built so far.
template <typename Scalar, typename Apply>
GroundPair<Scalar> lanczos_ground(Apply&& apply, Index dim, Scalar tol, const LanczosOptions& options = {}) {
    if (dim <= 0) throw InputError("Lanczos dimension must be positive");
    if (!(tol > 0)) throw InputError("Lanczos tolerance must be positive");

    const Index cap = std::min(dim, options.max_iterations);
    std::mt19937_64 rng(options.seed);
    Matrix<Scalar> basis(dim, cap);
    Vector<Scalar> alpha(cap), beta(cap);
    basis.col(0) = detail::random_unit<Scalar>(dim, rng);

    Vector<Scalar> w(dim), x(dim);
    int restarts = 0;
    Scalar theta = 0, residual = std::numeric_limits<Scalar>::infinity(), norm_estimate = 0;
    Index steps = 0;

    auto ritz = [&](Index m, bool want_vector) {
        Vector<Scalar> d = alpha.head(m);
        Vector<Scalar> e = beta.head(std::max<Index>(m - 1, 0));
        if (!want_vector) {
            Matrix<Scalar> last = Matrix<Scalar>::Zero(1, m);
            last(0, m - 1) = 1;
            tridiagonal_ql(d, e, last);
            Index lo = 0;
            d.minCoeff(&lo);
            theta = d(lo);
            norm_estimate = std::max(std::abs(d.minCoeff()), std::abs(d.maxCoeff()));
            residual = std::abs(beta(m - 1) * last(0, lo));
            return Vector<Scalar>();
        }
        auto decomposition = eigh_tridiagonal<Scalar>(d, e);
        theta = decomposition.values(0);
        norm_estimate = std::max(std::abs(decomposition.values(0)), std::abs(decomposition.values(m - 1)));
        Vector<Scalar> s = decomposition.vectors.col(0);
        residual = std::abs(beta(m - 1) * s(m - 1));
        return s;
    };

    for (Index j = 0; j < cap; ++j) {
        x = basis.col(j);
        apply(x, w);
        alpha(j) = x.dot(w);
        detail::orthogonalize(basis, j + 1, w);
        beta(j) = w.norm();
        steps = j + 1;

        const bool full = steps == dim;
        const Scalar scale = std::max(norm_estimate, std::abs(alpha(j)));
        const bool breakdown = !full && beta(j) <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                                                       std::max(scale, Scalar(1));
        if (full) {
            beta(j) = 0;
            ritz(steps, false);
            break;
        }
        if (breakdown) {
            if (restarts++ >= options.max_restarts)
                throw NumericError("Lanczos exceeded " + std::to_string(options.max_restarts) + " restarts");
            beta(j) = 0;
            Vector<Scalar> fresh = detail::random_unit<Scalar>(dim, rng);
            detail::orthogonalize(basis, j + 1, fresh);
            fresh.normalize();
            if (j + 1 < cap) basis.col(j + 1) = fresh;
            continue;
        }
        if (steps % options.check_every == 0 || steps == cap) {
            ritz(steps, false);
            if (residual <= tol * std::max(norm_estimate, std::numeric_limits<Scalar>::min())) break;
            if (steps == cap)
                throw NumericError("Lanczos did not converge within " + std::to_string(cap) +
                                   " iterations (residual " + std::to_string(static_cast<double>(residual)) + ")");
        }
        if (j + 1 < cap) basis.col(j + 1) = w / beta(j);
    }

    const Vector<Scalar> s = ritz(steps, true);
    if (steps < dim && residual > tol * std::max(norm_estimate, std::numeric_limits<Scalar>::min()))
        throw NumericError("Lanczos did not converge within " + std::to_string(steps) + " iterations (residual " +
                           std::to_string(static_cast<double>(residual)) + ")");
    GroundPair<Scalar> out;
    out.energy = theta;
    out.vector = (basis.leftCols(steps) * s).normalized();
    detail::fix_sign(out.vector);
    out.residual = residual;
    out.norm_estimate = norm_estimate;
    out.iterations = steps;
    out.restarts = restarts;
    return out;
}

/// Convenience overload for an explicit matrix.
template <typename Scalar>
GroundPair<Scalar> lanczos_ground(const SymmetricMatrix<Scalar>& matrix, Scalar tol,
                                  const LanczosOptions& options = {}) {
    return lanczos_ground<Scalar>([&](const Vector<Scalar>& in, Vector<Scalar>& out) { matrix.apply(in, out); },
                                  matrix.dim(), tol, options);
}

}  // namespace qpt::linalg

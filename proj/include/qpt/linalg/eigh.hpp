#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qpt/linalg/symmetric_matrix.hpp"

namespace qpt::linalg {

/// Eigenvalues ascending, eigenvectors as orthonormal columns in the same order.
template <typename Scalar>
struct EigenDecomposition {
    Vector<Scalar> values;
    Matrix<Scalar> vectors;

    Index dim() const { return values.size(); }
};

struct DenseOptions {
    Index threshold = 4096;
    int max_iterations_per_value = 60;
    double cluster_tolerance = 1e-10;  // relative to ||A||_F
};

/// Implicit-shift QL on the symmetric tridiagonal matrix with diagonal `d` and
/// sub-diagonal `e` (e(i) couples i and i+1; size n-1). On return `d` holds
/// the unsorted eigenvalues. Every Givens rotation is also applied to the
/// columns of `z`, which may hold any subset of rows of the accumulated basis
/// (all of them for full eigenvectors, or a single row when only the last
/// components are needed).
template <typename Scalar, typename ZMatrix>
void tridiagonal_ql(Vector<Scalar>& d, Vector<Scalar> e, ZMatrix& z, int max_iterations = 60) {
    using std::abs;
    const Index n = d.size();
    if (n == 0) return;
    Vector<Scalar> off = Vector<Scalar>::Zero(n);
    off.head(n - 1) = e;
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();

    for (Index l = 0; l < n; ++l) {
        int iter = 0;
        Index m;
        do {
            for (m = l; m < n - 1; ++m) {
                const Scalar dd = abs(d(m)) + abs(d(m + 1));
                if (abs(off(m)) <= eps * dd) break;
            }
            if (m == l) break;
            if (iter++ == max_iterations)
                throw NumericError("tridiagonal QL failed to converge for eigenvalue index " + std::to_string(l));

            Scalar g = (d(l + 1) - d(l)) / (Scalar(2) * off(l));
            Scalar r = std::hypot(g, Scalar(1));
            g = d(m) - d(l) + off(l) / (g + (g >= 0 ? r : -r));
            Scalar s = 1, c = 1, p = 0;
            Index i = m - 1;
            bool underflow = false;
            for (; i >= l; --i) {
                Scalar f = s * off(i);
                const Scalar b = c * off(i);
                r = std::hypot(f, g);
                off(i + 1) = r;
                if (r == Scalar(0)) {
                    d(i + 1) -= p;
                    off(m) = 0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d(i + 1) - p;
                r = (d(i) - g) * s + Scalar(2) * c * b;
                p = s * r;
                d(i + 1) = g + p;
                g = c * r - b;

                Scalar* zi = &z.coeffRef(0, i);
                Scalar* zj = &z.coeffRef(0, i + 1);
                const Index stride = z.rowStride();
                for (Index k = 0; k < z.rows(); ++k) {
                    const Scalar t = zj[k * stride];
                    zj[k * stride] = s * zi[k * stride] + c * t;
                    zi[k * stride] = c * zi[k * stride] - s * t;
                }
            }
            if (underflow) continue;
            d(l) -= p;
            off(l) = g;
            off(m) = 0;
        } while (m != l);
    }
}

namespace detail {

/// Householder reduction of the (column-major) symmetric `a` to tridiagonal
/// form. Only the lower triangle is referenced. On return `a` holds the
/// orthogonal factor Q with Q^T A Q = tridiag(d, e).
template <typename Scalar>
void householder_tridiagonalize(Matrix<Scalar>& a, Vector<Scalar>& d, Vector<Scalar>& e) {
    const Index n = a.rows();
    d.resize(n);
    e.resize(std::max<Index>(n - 1, 0));
    Vector<Scalar> betas = Vector<Scalar>::Zero(std::max<Index>(n - 2, 0));
    Vector<Scalar> p(n), w(n);

    for (Index k = 0; k + 2 < n; ++k) {
        const Index m = n - k - 1;
        auto x = a.col(k).tail(m);
        const Scalar alpha = x(0);
        const Scalar sigma = x.tail(m - 1).squaredNorm();
        if (sigma == Scalar(0)) {
            e(k) = alpha;
            betas(k) = 0;
            x.tail(m - 1).setZero();
            continue;
        }
        const Scalar mu = std::sqrt(alpha * alpha + sigma);
        const Scalar v0 = alpha <= 0 ? alpha - mu : -sigma / (alpha + mu);
        const Scalar beta = Scalar(2) * v0 * v0 / (sigma + v0 * v0);
        x.tail(m - 1) /= v0;
        x(0) = 1;
        e(k) = mu;
        betas(k) = beta;

        auto a22 = a.bottomRightCorner(m, m);
        auto pk = p.head(m);
        auto wk = w.head(m);
        pk.noalias() = beta * (a22.template selfadjointView<Eigen::Lower>() * x);
        wk = pk - (beta / Scalar(2) * pk.dot(x)) * x;
        a22.template selfadjointView<Eigen::Lower>().rankUpdate(x, wk, Scalar(-1));
    }
    for (Index k = 0; k < n; ++k) d(k) = a(k, k);
    if (n >= 2) e(n - 2) = a(n - 1, n - 2);

    // Accumulate Q = H_0 H_1 ... H_{n-3} backwards, in place.
    Vector<Scalar> row(n);
    // Save the reflectors before overwriting `a` with Q.
    Matrix<Scalar> reflectors = a.template triangularView<Eigen::StrictlyLower>();
    a.setIdentity();
    for (Index k = n - 3; k >= 0; --k) {
        if (betas(k) == Scalar(0)) continue;
        const Index m = n - k - 1;
        auto vk = reflectors.col(k).tail(m);
        auto qsub = a.bottomRightCorner(m, m);
        auto r = row.head(m);
        r.noalias() = qsub.transpose() * vk;
        qsub.noalias() -= betas(k) * vk * r.transpose();
    }
}

template <typename Scalar>
Index first_significant(const Eigen::Ref<const Vector<Scalar>>& v) {
    const Scalar cut = Scalar(1e-8);
    for (Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > cut) return i;
    return v.size();
}

/// Sort ascending and make the result deterministic: within clusters of
/// (near-)degenerate eigenvalues the vectors are re-orthonormalised and
/// ordered by the index of their first significant component; every vector
/// has its first significant component positive.
template <typename Scalar>
EigenDecomposition<Scalar> finalize(const Vector<Scalar>& raw_values, const Matrix<Scalar>& raw_vectors,
                                    Scalar cluster_gap) {
    const Index n = raw_values.size();
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return raw_values(a) < raw_values(b); });

    EigenDecomposition<Scalar> out;
    out.values.resize(n);
    out.vectors.resize(raw_vectors.rows(), n);
    for (Index k = 0; k < n; ++k) {
        out.values(k) = raw_values(order[k]);
        out.vectors.col(k) = raw_vectors.col(order[k]);
    }

    Index start = 0;
    while (start < n) {
        Index stop = start + 1;
        while (stop < n && out.values(stop) - out.values(stop - 1) < cluster_gap) ++stop;
        if (stop - start > 1) {
            auto block = out.vectors.middleCols(start, stop - start);
            for (Index i = 0; i < block.cols(); ++i) {
                for (int pass = 0; pass < 2; ++pass)
                    for (Index j = 0; j < i; ++j) block.col(i) -= block.col(j).dot(block.col(i)) * block.col(j);
                block.col(i).normalize();
            }
            std::vector<Index> idx(block.cols());
            std::iota(idx.begin(), idx.end(), Index(0));
            std::vector<Index> key(block.cols());
            for (Index i = 0; i < block.cols(); ++i) key[i] = first_significant<Scalar>(block.col(i));
            std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return key[a] < key[b]; });
            Matrix<Scalar> sorted(block.rows(), block.cols());
            for (Index i = 0; i < block.cols(); ++i) sorted.col(i) = block.col(idx[i]);
            block = sorted;
        }
        start = stop;
    }

    for (Index k = 0; k < n; ++k) {
        const Index lead = first_significant<Scalar>(out.vectors.col(k));
        if (lead < out.vectors.rows() && out.vectors(lead, k) < 0) out.vectors.col(k) *= Scalar(-1);
    }
    return out;
}

}  // namespace detail

/// Full eigendecomposition of a symmetric tridiagonal matrix.
template <typename Scalar>
EigenDecomposition<Scalar> eigh_tridiagonal(const Vector<Scalar>& diagonal, const Vector<Scalar>& sub,
                                            int max_iterations = 60) {
    Vector<Scalar> d = diagonal;
    Matrix<Scalar> z = Matrix<Scalar>::Identity(d.size(), d.size());
    tridiagonal_ql(d, sub, z, max_iterations);
    Scalar scale = std::sqrt(diagonal.squaredNorm() + 2 * sub.squaredNorm());
    return detail::finalize<Scalar>(d, z, Scalar(1e-10) * scale);
}

/// Full spectrum of a symmetric matrix by Householder tridiagonalisation
/// followed by implicit-shift QL.
template <typename Scalar>
EigenDecomposition<Scalar> eigh_dense(const SymmetricMatrix<Scalar>& matrix, const DenseOptions& options = {}) {
    const Index n = matrix.dim();
    if (n > options.threshold)
        throw ResourceError("dense eigensolver refused dimension " + std::to_string(n) + " (threshold " +
                            std::to_string(options.threshold) + ")");
    Matrix<Scalar> work = matrix.to_dense();
    Vector<Scalar> d, e;
    detail::householder_tridiagonalize(work, d, e);
    tridiagonal_ql(d, e, work, options.max_iterations_per_value);
    const Scalar gap = Scalar(options.cluster_tolerance) * matrix.frobenius_norm();
    return detail::finalize<Scalar>(d, work, gap);
}

}  // namespace qpt::linalg

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qpt/errors.hpp"

namespace qpt::linalg {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// One stored entry of the upper triangle (row <= col).
template <typename Scalar>
struct Triplet {
    Scalar value;
    Index row;
    Index col;
};

/// Real symmetric matrix with structural symmetry: only the upper triangle is
/// ever supplied. Storage is either dense (row-major) or a sorted coordinate
/// list. The object is immutable once built.
template <typename Scalar>
class SymmetricMatrix {
public:
    using DenseStorage = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using SparseStorage = std::vector<Triplet<Scalar>>;

    /// Copies the upper triangle of `a`; the lower triangle is ignored.
    template <typename Derived>
    static SymmetricMatrix from_dense(const Eigen::MatrixBase<Derived>& a) {
        if (a.rows() != a.cols() || a.rows() == 0)
            throw InputError("symmetric matrix must be square and non-empty");
        DenseStorage full(a.rows(), a.cols());
        for (Index i = 0; i < a.rows(); ++i) {
            for (Index j = i; j < a.cols(); ++j) {
                const Scalar v = a(i, j);
                if (!std::isfinite(static_cast<double>(v)))
                    throw InputError("non-finite matrix entry at (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ")");
                full(i, j) = v;
                full(j, i) = v;
            }
        }
        return SymmetricMatrix(a.rows(), std::move(full));
    }

    /// Entries must satisfy row <= col; duplicates are summed; explicit zeros
    /// are kept out of the stored list.
    static SymmetricMatrix from_upper_triplets(Index dim, SparseStorage entries) {
        if (dim <= 0) throw InputError("symmetric matrix dimension must be positive");
        for (const auto& t : entries) {
            if (t.row < 0 || t.col >= dim || t.row > t.col)
                throw InputError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                 ") is not in the upper triangle of a " + std::to_string(dim) +
                                 "-dimensional matrix");
            if (!std::isfinite(static_cast<double>(t.value)))
                throw InputError("non-finite matrix entry at (" + std::to_string(t.row) + ", " +
                                 std::to_string(t.col) + ")");
        }
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        SparseStorage merged;
        merged.reserve(entries.size());
        for (const auto& t : entries) {
            if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
                merged.back().value += t.value;
            else
                merged.push_back(t);
        }
        std::erase_if(merged, [](const auto& t) { return t.value == Scalar(0); });
        return SymmetricMatrix(dim, std::move(merged));
    }

    Index dim() const { return dim_; }
    bool is_sparse() const { return std::holds_alternative<SparseStorage>(storage_); }

    /// Sorted upper-triangle entries; only valid for sparse storage.
    const SparseStorage& triplets() const { return std::get<SparseStorage>(storage_); }

    Scalar operator()(Index i, Index j) const {
        if (i > j) std::swap(i, j);
        if (!is_sparse()) return std::get<DenseStorage>(storage_)(i, j);
        const auto& list = triplets();
        auto it = std::lower_bound(list.begin(), list.end(), std::pair{i, j}, [](const auto& t, const auto& key) {
            return t.row != key.first ? t.row < key.first : t.col < key.second;
        });
        return (it != list.end() && it->row == i && it->col == j) ? it->value : Scalar(0);
    }

    Matrix<Scalar> to_dense() const {
        if (!is_sparse()) return std::get<DenseStorage>(storage_);
        Matrix<Scalar> out = Matrix<Scalar>::Zero(dim_, dim_);
        for (const auto& t : triplets()) {
            out(t.row, t.col) = t.value;
            out(t.col, t.row) = t.value;
        }
        return out;
    }

    Scalar frobenius_norm() const {
        if (!is_sparse()) return std::get<DenseStorage>(storage_).norm();
        Scalar sum = 0;
        for (const auto& t : triplets()) sum += (t.row == t.col ? 1 : 2) * t.value * t.value;
        return std::sqrt(sum);
    }

    /// y = A x
    void apply(const Vector<Scalar>& x, Vector<Scalar>& y) const {
        if (x.size() != dim_) throw InputError("matrix-vector dimension mismatch");
        if (!is_sparse()) {
            y.noalias() = std::get<DenseStorage>(storage_) * x;
        } else {
            y.noalias() = full_ * x;
        }
    }

private:
    SymmetricMatrix(Index dim, DenseStorage dense) : dim_(dim), storage_(std::move(dense)) {}

    SymmetricMatrix(Index dim, SparseStorage list) : dim_(dim), storage_(std::move(list)) {
        std::vector<Eigen::Triplet<Scalar>> both;
        both.reserve(2 * triplets().size());
        for (const auto& t : triplets()) {
            both.emplace_back(t.row, t.col, t.value);
            if (t.row != t.col) both.emplace_back(t.col, t.row, t.value);
        }
        full_.resize(dim_, dim_);
        full_.setFromTriplets(both.begin(), both.end());
        full_.makeCompressed();
    }

    Index dim_;
    std::variant<DenseStorage, SparseStorage> storage_;
    // Both triangles, for fast products on the sparse path.
    Eigen::SparseMatrix<Scalar, Eigen::RowMajor> full_;
};

}  // namespace qpt::linalg

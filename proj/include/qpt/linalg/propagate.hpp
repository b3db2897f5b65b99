#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "qpt/linalg/eigh.hpp"

namespace qpt::linalg {

/// |<phi_k|psi0>|^2 for every eigenvector; sums to 1 for a unit psi0.
template <typename Scalar>
Vector<Scalar> spectral_weights(const EigenDecomposition<Scalar>& decomposition, const Vector<Scalar>& psi0) {
    if (psi0.size() != decomposition.vectors.rows())
        throw InputError("initial state has dimension " + std::to_string(psi0.size()) + ", decomposition has " +
                         std::to_string(decomposition.vectors.rows()));
    if (std::abs(psi0.norm() - Scalar(1)) > Scalar(1e-10)) throw InputError("initial state is not normalised");
    return (decomposition.vectors.transpose() * psi0).array().square().matrix();
}

/// <psi0| exp(-i H t) |psi0> = sum_k w_k exp(-i E_k t)
template <typename Scalar>
std::complex<Scalar> survival_amplitude(const Vector<Scalar>& values, const Vector<Scalar>& weights, Scalar t) {
    Scalar re = 0, im = 0;
    for (Index k = 0; k < values.size(); ++k) {
        const Scalar phase = values(k) * t;
        re += weights(k) * std::cos(phase);
        im -= weights(k) * std::sin(phase);
    }
    return {re, im};
}

template <typename Scalar>
std::complex<Scalar> spectral_propagate(const EigenDecomposition<Scalar>& decomposition, const Vector<Scalar>& psi0,
                                        Scalar t) {
    return survival_amplitude(decomposition.values, spectral_weights(decomposition, psi0), t);
}

/// |amplitude|^2 over a time grid, weights computed once.
template <typename Scalar>
std::vector<Scalar> survival_probabilities(const EigenDecomposition<Scalar>& decomposition, const Vector<Scalar>& psi0,
                                           std::span<const Scalar> times) {
    const Vector<Scalar> weights = spectral_weights(decomposition, psi0);
    std::vector<Scalar> out;
    out.reserve(times.size());
    for (Scalar t : times) out.push_back(std::norm(survival_amplitude(decomposition.values, weights, t)));
    return out;
}

}  // namespace qpt::linalg

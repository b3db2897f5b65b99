#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpt/echo.hpp"
#include "qpt/linalg/eigh.hpp"
#include "qpt/linalg/lanczos.hpp"

namespace qpt::dicke {

/// Largest full-basis dimension the builders accept.
inline constexpr std::size_t kDefaultMaxDim = std::size_t(1) << 22;

/// Dicke Hamiltonian truncated to n_b boson levels (0..n_b-1) and the
/// j = N/2 spin multiplet. Basis index = n (N+1) + (m + j).
struct TruncatedDicke {
    int N;
    int n_b;
    double omega;
    double omega0;
    double lambda;

    void validate() const;
    std::size_t dim() const { return std::size_t(n_b) * std::size_t(N + 1); }
    double j() const { return 0.5 * N; }
    std::size_t index(int n, int k) const { return std::size_t(n) * std::size_t(N + 1) + std::size_t(k); }
};

/// Whole Hamiltonian, upper-triangle coordinate storage.
linalg::SymmetricMatrix<double> build_hamiltonian(const TruncatedDicke& spec, std::size_t max_dim = kDefaultMaxDim);

/// Basis states with (n + m + j) even (parity 0) or odd (parity 1), in
/// ascending full-basis order, and the Hamiltonian restricted to them.
struct ParityBlock {
    int parity;
    std::vector<std::size_t> states;
    linalg::SymmetricMatrix<double> matrix;
};

ParityBlock build_parity_block(const TruncatedDicke& spec, int parity, std::size_t max_dim = kDefaultMaxDim);

struct SolverOptions {
    linalg::DenseOptions dense;
    linalg::LanczosOptions lanczos;
    double lanczos_tol = 1e-12;
    std::size_t max_dim = kDefaultMaxDim;
};

struct ExactGround {
    double energy;
    Eigen::VectorXd vector;  // full basis, unit norm, largest component positive
    int parity;
    std::size_t block_dim;
    std::string solver;                 // "dense" or "lanczos"
    std::optional<double> parity_gap;   // |E_odd - E_even|, super-radiant side only
    bool quasi_degenerate = false;      // parity_gap < 1e-10
};

/// Lowest eigenpair. Normal phase: even block. Super-radiant phase: both
/// blocks, the lower one wins (even on a tie).
ExactGround ground_state_exact(const TruncatedDicke& spec, const SolverOptions& options = {});

/// |<g(lambda1)|g(lambda2)>| on a common truncation.
double fidelity_exact(double omega, double omega0, int N, int n_b, double lambda1, double lambda2,
                      const SolverOptions& options = {});

enum class DReference { Scaling, Gaussian };

struct ConvergenceOptions {
    double nb_factor = 1.0;  // n_b = max(2, round(nb_factor N))
    DReference reference = DReference::Scaling;
    SolverOptions solver;
};

struct ConvergenceEntry {
    int N;
    int n_b;
    double LpN;
    double D;
};

struct ConvergenceSeries {
    std::vector<ConvergenceEntry> entries;
    double Lp_reference;
    DReference reference;
};

/// D(N) = |L_p^N - L_p| over ascending N.
ConvergenceSeries convergence_D(double omega, double omega0, double lambda1, double lambda2,
                                std::span<const int> N_list, const ConvergenceOptions& options = {});

/// Successive log-log slopes Delta ln D / Delta ln N.
std::vector<double> log_slopes(const ConvergenceSeries& series);

/// Survival probability of the lambda2 ground state under H(lambda1), both
/// restricted to the even block and fully diagonalised; tau = e1(lambda1) t.
echo::EchoSeries echo_exact(double omega, double omega0, int N, int n_b, double lambda1, double lambda2,
                            std::span<const double> t_grid, const linalg::DenseOptions& dense = {});

}  // namespace qpt::dicke

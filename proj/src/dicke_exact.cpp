#include "qpt/dicke_exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qpt/dicke_effective.hpp"
#include "qpt/errors.hpp"
#include "qpt/linalg/propagate.hpp"

namespace qpt::dicke {

void TruncatedDicke::validate() const {
    if (N < 1) throw InputError("atom number N must be at least 1");
    if (n_b < 2) throw InputError("boson cutoff n_b must be at least 2");
    DickeParams{omega, omega0, lambda}.validate();
}

namespace {

using Triplets = std::vector<linalg::Triplet<double>>;

void check_dim(const TruncatedDicke& spec, std::size_t max_dim) {
    spec.validate();
    if (spec.dim() > max_dim)
        throw ResourceError("Hilbert space dimension " + std::to_string(spec.dim()) + " exceeds the cap " +
                            std::to_string(max_dim));
}

// Visits every stored upper-triangle element as (row, col, value) in full-basis indices.
template <typename Visit>
void for_each_element(const TruncatedDicke& spec, Visit&& visit) {
    const double j = spec.j();
    const double jj = j * (j + 1.0);
    const double g = spec.lambda / std::sqrt(double(spec.N));
    for (int n = 0; n < spec.n_b; ++n) {
        for (int k = 0; k <= spec.N; ++k) {
            const double m = k - j;
            const std::size_t row = spec.index(n, k);
            visit(row, row, spec.omega * n + spec.omega0 * m);
            if (g == 0.0 || n + 1 >= spec.n_b) continue;
            const double boson = std::sqrt(double(n + 1));
            if (k < spec.N) visit(row, spec.index(n + 1, k + 1), g * boson * std::sqrt(jj - m * (m + 1.0)));
            if (k > 0) visit(row, spec.index(n + 1, k - 1), g * boson * std::sqrt(jj - m * (m - 1.0)));
        }
    }
}

}  // namespace

linalg::SymmetricMatrix<double> build_hamiltonian(const TruncatedDicke& spec, std::size_t max_dim) {
    check_dim(spec, max_dim);
    Triplets t;
    t.reserve(3 * spec.dim());
    for_each_element(spec, [&](std::size_t r, std::size_t c, double v) {
        t.push_back({v, linalg::Index(std::min(r, c)), linalg::Index(std::max(r, c))});
    });
    return linalg::SymmetricMatrix<double>::from_upper_triplets(linalg::Index(spec.dim()), std::move(t));
}

ParityBlock build_parity_block(const TruncatedDicke& spec, int parity, std::size_t max_dim) {
    check_dim(spec, max_dim);
    if (parity != 0 && parity != 1) throw InputError("parity must be 0 or 1");
    std::vector<std::size_t> states;
    std::vector<std::ptrdiff_t> position(spec.dim(), -1);
    for (int n = 0; n < spec.n_b; ++n)
        for (int k = 0; k <= spec.N; ++k)
            if ((n + k) % 2 == parity) {
                position[spec.index(n, k)] = std::ptrdiff_t(states.size());
                states.push_back(spec.index(n, k));
            }
    if (states.empty()) throw InputError("empty parity block");

    Triplets t;
    t.reserve(3 * states.size());
    for_each_element(spec, [&](std::size_t r, std::size_t c, double v) {
        const std::ptrdiff_t pr = position[r], pc = position[c];
        if (pr < 0 && pc < 0) return;
        if (pr < 0 || pc < 0) throw NumericError("Hamiltonian element couples opposite parities");
        t.push_back({v, std::min(pr, pc), std::max(pr, pc)});
    });
    const auto dim = linalg::Index(states.size());
    return {parity, std::move(states), linalg::SymmetricMatrix<double>::from_upper_triplets(dim, std::move(t))};
}

namespace {

struct BlockGround {
    double energy;
    Eigen::VectorXd vector;  // block basis
    std::string solver;
};

BlockGround solve_block(const ParityBlock& block, const SolverOptions& options) {
    if (block.matrix.dim() <= options.dense.threshold) {
        const auto decomposition = linalg::eigh_dense(block.matrix, options.dense);
        return {decomposition.values(0), decomposition.vectors.col(0), "dense"};
    }
    const auto pair = linalg::lanczos_ground(block.matrix, options.lanczos_tol, options.lanczos);
    return {pair.energy, pair.vector, "lanczos"};
}

Eigen::VectorXd embed(const TruncatedDicke& spec, const ParityBlock& block, const Eigen::VectorXd& v) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(linalg::Index(spec.dim()));
    for (std::size_t i = 0; i < block.states.size(); ++i) full(linalg::Index(block.states[i])) = v(linalg::Index(i));
    Eigen::Index lead = 0;
    full.cwiseAbs().maxCoeff(&lead);
    if (full(lead) < 0) full = -full;
    return full;
}

}  // namespace

ExactGround ground_state_exact(const TruncatedDicke& spec, const SolverOptions& options) {
    const ParityBlock even = build_parity_block(spec, 0, options.max_dim);
    const BlockGround g_even = solve_block(even, options);
    const bool superradiant = DickeParams{spec.omega, spec.omega0, spec.lambda}.phase() == Phase::SuperRadiant;

    if (!superradiant) {
        ExactGround out{g_even.energy, embed(spec, even, g_even.vector), 0, even.states.size(), g_even.solver, {}, false};
        return out;
    }
    const ParityBlock odd = build_parity_block(spec, 1, options.max_dim);
    const BlockGround g_odd = solve_block(odd, options);
    const double gap = std::abs(g_odd.energy - g_even.energy);
    ExactGround out = g_odd.energy < g_even.energy
                          ? ExactGround{g_odd.energy, embed(spec, odd, g_odd.vector), 1, odd.states.size(),
                                        g_odd.solver, gap, false}
                          : ExactGround{g_even.energy, embed(spec, even, g_even.vector), 0, even.states.size(),
                                        g_even.solver, gap, false};
    out.quasi_degenerate = gap < 1e-10;
    return out;
}

double fidelity_exact(double omega, double omega0, int N, int n_b, double lambda1, double lambda2,
                      const SolverOptions& options) {
    const TruncatedDicke s1{N, n_b, omega, omega0, lambda1};
    const TruncatedDicke s2{N, n_b, omega, omega0, lambda2};
    s1.validate();
    s2.validate();
    if (lambda1 == lambda2) return 1.0;
    const ExactGround g1 = ground_state_exact(s1, options);
    const ExactGround g2 = ground_state_exact(s2, options);
    return std::min(1.0, std::abs(g1.vector.dot(g2.vector)));
}

ConvergenceSeries convergence_D(double omega, double omega0, double lambda1, double lambda2,
                                std::span<const int> N_list, const ConvergenceOptions& options) {
    if (N_list.empty()) throw InputError("N list is empty");
    for (std::size_t i = 1; i < N_list.size(); ++i)
        if (N_list[i] <= N_list[i - 1]) throw InputError("N list must be strictly ascending");
    if (!(options.nb_factor > 0)) throw InputError("boson cutoff factor must be positive");

    ConvergenceSeries out;
    out.reference = options.reference;
    const DickeParams p1{omega, omega0, lambda1}, p2{omega, omega0, lambda2};
    if (lambda1 == lambda2) {
        out.Lp_reference = 1.0;
    } else if (options.reference == DReference::Scaling) {
        out.Lp_reference = fidelity_scaling(scaling_eta(lambda1, lambda2, p1.lambda_c()).eta);
    } else {
        out.Lp_reference = fidelity_gaussian(p1, p2);
    }
    for (const int N : N_list) {
        const int n_b = std::max(2, int(std::lround(options.nb_factor * N)));
        const double lp = fidelity_exact(omega, omega0, N, n_b, lambda1, lambda2, options.solver);
        out.entries.push_back({N, n_b, lp, std::abs(lp - out.Lp_reference)});
    }
    return out;
}

std::vector<double> log_slopes(const ConvergenceSeries& series) {
    std::vector<double> out;
    for (std::size_t i = 1; i < series.entries.size(); ++i) {
        const auto& a = series.entries[i - 1];
        const auto& b = series.entries[i];
        out.push_back(std::log(b.D / a.D) / std::log(double(b.N) / double(a.N)));
    }
    return out;
}

echo::EchoSeries echo_exact(double omega, double omega0, int N, int n_b, double lambda1, double lambda2,
                            std::span<const double> t_grid, const linalg::DenseOptions& dense) {
    echo::check_time_grid(t_grid);
    const TruncatedDicke s1{N, n_b, omega, omega0, lambda1};
    const TruncatedDicke s2{N, n_b, omega, omega0, lambda2};
    const ParityBlock b1 = build_parity_block(s1, 0);
    if (b1.matrix.dim() > dense.threshold)
        throw ResourceError("echo needs the full spectrum of a " + std::to_string(b1.matrix.dim()) +
                            "-dimensional block, above the dense threshold " + std::to_string(dense.threshold) +
                            "; reduce N or the boson cutoff");
    const ModeSpectrum modes = mode_energies({omega, omega0, lambda1});
    if (!(modes.e1 > 0)) throw DomainError("soft mode is gapless at lambda1 = lambda_c; no rescaling frequency");

    const auto decomposition = linalg::eigh_dense(b1.matrix, dense);
    Eigen::VectorXd psi0;
    if (lambda1 == lambda2) {
        psi0 = decomposition.vectors.col(0);
    } else {
        const ParityBlock b2 = build_parity_block(s2, 0);
        psi0 = linalg::eigh_dense(b2.matrix, dense).vectors.col(0);
    }
    psi0.normalize();

    echo::EchoSeries out;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.M = linalg::survival_probabilities<double>(decomposition, psi0, t_grid);
    out.omega1 = modes.e1;
    out.tau.reserve(out.t.size());
    for (const double t : out.t) out.tau.push_back(modes.e1 * t);
    out.period = std::numbers::pi / modes.e1;
    out.source = {"dicke", lambda1, lambda2, critical_coupling(omega, omega0)};
    out.meta = {{"kind", "exact diagonalization, even parity block"},
                {"N", std::to_string(N)},
                {"n_b", std::to_string(n_b)},
                {"block_dim", std::to_string(b1.matrix.dim())},
                {"period", "pi / e1(lambda1), thermodynamic limit"}};
    return out;
}

}  // namespace qpt::dicke

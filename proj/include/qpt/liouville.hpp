#pragma once

// Brute-force ground truth for small chains: the full GKSL generator on the
// 4^L-dimensional operator space, its unique steady state, and the covariance
// matrix extracted from it. Used to validate the covariance solvers.

#include <Eigen/Dense>

#include "qpt/chain.hpp"

namespace qpt {

/// Largest chain the dense generator is built for (4^L x 4^L storage).
inline constexpr int kMaxLiouvilleSites = 6;

/// Fermionic annihilation operator on `site` (1-based) as a 2^L x 2^L matrix,
/// realized through the Jordan-Wigner string c_i = prod_{j<i}(-sigma^z_j) sigma^-_i.
Eigen::MatrixXcd fermion_lowering(int site, int length);

/// Many-body Hamiltonian of the chain on the 2^L-dimensional Fock space.
Eigen::MatrixXcd many_body_hamiltonian(const ChainSpec& spec);

/// Dense GKSL generator acting on column-major vectorized density matrices.
/// Jump operators: sqrt(gamma(1-f1)) c_1, sqrt(gamma f1) c_1^dag, the same on
/// site L, and sqrt(Gamma) c_i^dag c_i on every site.
/// Throws SizeTooLargeError for length > kMaxLiouvilleSites.
Eigen::MatrixXcd build_liouvillian(const ChainSpec& spec, const DriveSpec& drive);

/// Unique trace-one steady state of the generator, hermitized.
/// Throws NonUniqueSteadyStateError when the null space is not one-dimensional.
Eigen::MatrixXcd steady_state_dense(const Eigen::MatrixXcd& generator);

/// C_ij = tr(rho c_j^dag c_i) with the same operator realization as above.
Eigen::MatrixXcd covariance_from_density(const Eigen::MatrixXcd& rho);

/// Convenience: steady-state covariance straight from the spec.
Eigen::MatrixXcd oracle_covariance(const ChainSpec& spec, const DriveSpec& drive);

}  // namespace qpt

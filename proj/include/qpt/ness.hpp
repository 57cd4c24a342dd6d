#pragma once

// Steady-state covariance solvers for the boundary-driven chain.
//
// Gamma = 0: W C + C W^dag = F is a Lyapunov equation, solved through the
// eigendecomposition of W. Gamma > 0 couples the diagonal and off-diagonal of
// C, so the vectorized equation is solved as a sparse linear system.

#include <Eigen/Dense>

#include "qpt/chain.hpp"

namespace qpt {

enum class SolveMethod { Auto, LyapunovEigen, SparseVectorized };

const char* solve_method_name(SolveMethod method);

struct SolverOptions {
  SolveMethod method = SolveMethod::Auto;
  double residual_tolerance = 1e-9;  // accepted if residual <= tol * max(gamma, 1)
  bool hermitize = true;             // replace C by (C + C^dag)/2 after the residual check
};

struct NessSolution {
  Eigen::MatrixXcd covariance;     // C_ij = <c_j^dag c_i>
  Eigen::VectorXd site_currents;   // J_i between sites i and i+1, length L-1
  double current = 0.0;            // mean of site_currents
  double homogeneity = 0.0;        // max_i |J_i - current|
  double boundary_in = 0.0;        // J_0 = gamma (f1 - C_11)
  double boundary_out = 0.0;       // J_L = gamma (fL - C_LL)
  Eigen::VectorXd density;         // Re C_ii
  double residual = 0.0;           // max-norm of W C + C W^dag + Gamma offdiag(C) - F
  SolveMethod method_used = SolveMethod::Auto;
};

/// Solve W C + C W^dag = F with F = diag(injection).
/// W must have its spectrum in the open right half-plane.
/// Throws SingularSystemError when an eigenvalue pair makes the equation
/// numerically singular, NumericalBreakdownError on factorization failure.
Eigen::MatrixXcd lyapunov_eigen_solve(const Eigen::MatrixXcd& drift,
                                      const Eigen::VectorXd& injection);

/// Solve W C + C W^dag + Gamma*offdiag(C) = F as a sparse L^2 x L^2 system
/// over vec(C) (column-major). Requires Gamma > 0.
Eigen::MatrixXcd sparse_vectorized_solve(const Eigen::MatrixXcd& drift,
                                         const Eigen::VectorXd& injection,
                                         double dephasing);

/// Max-norm of the steady-state defect W C + C W^dag + Gamma offdiag(C) - F.
double steady_state_residual(const Eigen::MatrixXcd& drift,
                             const Eigen::VectorXd& injection,
                             double dephasing,
                             const Eigen::MatrixXcd& covariance);

struct CurrentProfile {
  Eigen::VectorXd site_currents;
  double current = 0.0;
  double homogeneity = 0.0;
};

/// Bond currents J_i = -2 Im C_{i,i+1}. The sign makes f1 > fL give J > 0
/// (particle flow from site 1 toward site L), matching the boundary current
/// J_0 = gamma (f1 - C_11).
CurrentProfile extract_currents(const Eigen::MatrixXcd& covariance);

/// (J_0, J_L) = (gamma (f1 - C_11), gamma (fL - C_LL)).
/// In the steady state J_0 = J and J_L = -J.
std::pair<double, double> boundary_currents(const Eigen::MatrixXcd& covariance,
                                            const DriveSpec& drive);

/// Build W and F for the spec and dispatch on the dephasing strength:
/// method Auto picks LyapunovEigen when Gamma = 0 and SparseVectorized otherwise.
NessSolution solve_ness(const ChainSpec& spec, const DriveSpec& drive,
                        const SolverOptions& options = {});

}  // namespace qpt

#include "qpt/ness.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <complex>
#include <limits>
#include <tuple>
#include <vector>

#include "qpt/errors.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace qpt {

namespace {

using cd = std::complex<double>;

// Eigendecomposition of a complex upper-Hessenberg matrix (the drift matrix is
// tridiagonal, so the Hessenberg reduction step of a general eigensolver is
// skipped): Schur form via zhseqr, eigenvectors back-transformed via ztrevc.
// The LAPACKE convenience wrappers mis-handle the zhseqr workspace query on
// some builds, so workspace is allocated explicitly.
struct HessenbergEigen {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};

HessenbergEigen hessenberg_eigen(const Eigen::MatrixXcd& drift) {
  const lapack_int n = static_cast<lapack_int>(drift.rows());
  Eigen::MatrixXcd schur = drift;
  Eigen::MatrixXcd vectors(n, n);
  Eigen::VectorXcd values(n);
  std::vector<cd> work(static_cast<size_t>(n) * n + 33 * static_cast<size_t>(n));
  lapack_int info = LAPACKE_zhseqr_work(LAPACK_COL_MAJOR, 'S', 'I', n, 1, n,
                                        schur.data(), n, values.data(),
                                        vectors.data(), n, work.data(),
                                        static_cast<lapack_int>(work.size()));
  if (info > 0)
    throw NumericalBreakdownError("Schur iteration failed to converge");
  if (info < 0)
    throw NumericalBreakdownError("invalid argument in Schur factorization");

  std::vector<double> rwork(static_cast<size_t>(n));
  lapack_int m = 0;
  info = LAPACKE_ztrevc_work(LAPACK_COL_MAJOR, 'R', 'B', nullptr, n,
                             schur.data(), n, nullptr, 1, vectors.data(), n, n,
                             &m, work.data(), rwork.data());
  if (info != 0)
    throw NumericalBreakdownError("eigenvector back-transformation failed");
  return {std::move(values), std::move(vectors)};
}

void check_inputs(const Eigen::MatrixXcd& drift, const Eigen::VectorXd& injection) {
  if (drift.rows() != drift.cols())
    throw InvalidArgumentError("drift matrix must be square");
  if (drift.rows() < 2)
    throw InvalidArgumentError("drift matrix must be at least 2 x 2");
  if (injection.size() != drift.rows())
    throw InvalidArgumentError("injection vector length must match the drift matrix");
}

}  // namespace

const char* solve_method_name(SolveMethod method) {
  switch (method) {
    case SolveMethod::Auto: return "auto";
    case SolveMethod::LyapunovEigen: return "lyapunov_eigen";
    case SolveMethod::SparseVectorized: return "sparse_vectorized";
  }
  return "?";
}

Eigen::MatrixXcd lyapunov_eigen_solve(const Eigen::MatrixXcd& drift,
                                      const Eigen::VectorXd& injection) {
  check_inputs(drift, injection);
  const int n = static_cast<int>(drift.rows());

  HessenbergEigen eig = hessenberg_eigen(drift);
  const Eigen::VectorXcd& w = eig.values;

  // Denominators w_k + conj(w_l). A near-zero pair means the Lyapunov
  // equation has no resolvable solution at this precision.
  double wmax = 0.0;
  for (int k = 0; k < n; ++k) wmax = std::max(wmax, std::abs(w(k)));
  double dmin = std::numeric_limits<double>::infinity();
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      dmin = std::min(dmin, std::abs(w(k) + std::conj(w(l))));
  if (!(dmin >= 1e-12 * wmax))
    throw SingularSystemError("eigenvalue pair with w_k + conj(w_l) below 1e-12*|W|");

  // Transform F into the eigenbasis. F = diag(injection) has few nonzero
  // entries, so only those columns of S^{-1} are needed.
  Eigen::MatrixXcd lu = eig.vectors;
  std::vector<lapack_int> ipiv(static_cast<size_t>(n));
  lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lu.data(), n, ipiv.data());
  if (info != 0)
    throw NumericalBreakdownError("eigenvector matrix is numerically singular");

  std::vector<int> cols;
  for (int j = 0; j < n; ++j)
    if (injection(j) != 0.0) cols.push_back(j);

  Eigen::MatrixXcd transformed = Eigen::MatrixXcd::Zero(n, n);
  if (!cols.empty()) {
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) rhs(cols[c], static_cast<int>(c)) = 1.0;
    info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, static_cast<lapack_int>(cols.size()),
                          lu.data(), n, ipiv.data(), rhs.data(), n);
    if (info != 0)
      throw NumericalBreakdownError("solve against the eigenvector matrix failed");
    Eigen::VectorXd weights(static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) weights(static_cast<int>(c)) = injection(cols[c]);
    transformed = rhs * weights.asDiagonal() * rhs.adjoint();
  }

  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      transformed(k, l) /= (w(k) + std::conj(w(l)));

  return eig.vectors * transformed * eig.vectors.adjoint();
}

Eigen::MatrixXcd sparse_vectorized_solve(const Eigen::MatrixXcd& drift,
                                         const Eigen::VectorXd& injection,
                                         double dephasing) {
  check_inputs(drift, injection);
  if (!(dephasing > 0))
    throw InvalidArgumentError("sparse_vectorized_solve requires Gamma > 0");
  const int n = static_cast<int>(drift.rows());
  const long N = static_cast<long>(n) * n;

  // Nonzero pattern of W (tridiagonal plus boundary diagonal terms).
  std::vector<std::tuple<int, int, cd>> wnz;
  for (int j = 0; j < n; ++j)
    for (int i = std::max(0, j - 1); i <= std::min(n - 1, j + 1); ++i)
      if (drift(i, j) != cd(0, 0)) wnz.emplace_back(i, j, drift(i, j));

  // vec(C) column-major: unknown p = i + n*j holds C_ij.
  // (W C)_{ij}      -> entry W_{ik} at column (k + n*j)
  // (C W^dag)_{ij}  -> entry conj(W_{jk}) at column (i + n*k)
  // Gamma offdiag   -> Gamma on the diagonal wherever i != j
  std::vector<Eigen::Triplet<cd>> trips;
  trips.reserve(static_cast<size_t>(7) * static_cast<size_t>(N));
  auto at = [n](int i, int j) { return i + static_cast<long>(n) * j; };
  for (const auto& [i, k, v] : wnz)
    for (int j = 0; j < n; ++j) trips.emplace_back(at(i, j), at(k, j), v);
  for (const auto& [j, k, v] : wnz)
    for (int i = 0; i < n; ++i) trips.emplace_back(at(i, j), at(i, k), std::conj(v));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j) trips.emplace_back(at(i, j), at(i, j), cd(dephasing, 0));

  Eigen::SparseMatrix<cd> M(N, N);
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();
  trips.clear();
  trips.shrink_to_fit();

  Eigen::SparseLU<Eigen::SparseMatrix<cd>> solver;
  solver.compute(M);
  if (solver.info() != Eigen::Success)
    throw SingularSystemError("sparse factorization failed: " + solver.lastErrorMessage());

  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(N);
  for (int j = 0; j < n; ++j) b(at(j, j)) = injection(j);
  Eigen::VectorXcd x = solver.solve(b);
  if (solver.info() != Eigen::Success)
    throw NumericalBreakdownError("sparse back-substitution failed");

  return Eigen::Map<Eigen::MatrixXcd>(x.data(), n, n);
}

double steady_state_residual(const Eigen::MatrixXcd& drift,
                             const Eigen::VectorXd& injection,
                             double dephasing,
                             const Eigen::MatrixXcd& covariance) {
  Eigen::MatrixXcd defect = drift * covariance + covariance * drift.adjoint();
  if (dephasing != 0.0) {
    defect += dephasing * covariance;
    defect.diagonal() -= dephasing * covariance.diagonal();
  }
  defect.diagonal() -= injection.cast<cd>();
  return defect.cwiseAbs().maxCoeff();
}

CurrentProfile extract_currents(const Eigen::MatrixXcd& covariance) {
  const int n = static_cast<int>(covariance.rows());
  CurrentProfile out;
  out.site_currents.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i)
    out.site_currents(i) = -2.0 * covariance(i, i + 1).imag();
  out.current = out.site_currents.mean();
  out.homogeneity = (out.site_currents.array() - out.current).abs().maxCoeff();
  return out;
}

std::pair<double, double> boundary_currents(const Eigen::MatrixXcd& covariance,
                                            const DriveSpec& drive) {
  const int n = static_cast<int>(covariance.rows());
  const double in = drive.gamma * (drive.f1 - covariance(0, 0).real());
  const double out = drive.gamma * (drive.fL - covariance(n - 1, n - 1).real());
  return {in, out};
}

NessSolution solve_ness(const ChainSpec& spec, const DriveSpec& drive,
                        const SolverOptions& options) {
  spec.validate();
  drive.validate();
  if (options.method == SolveMethod::LyapunovEigen && drive.dephasing != 0.0)
    throw InvalidArgumentError("LyapunovEigen method is only valid when Gamma = 0");
  if (!(options.residual_tolerance > 0))
    throw InvalidArgumentError("residual tolerance must be positive");

  SolveMethod method = options.method;
  if (method == SolveMethod::Auto)
    method = drive.dephasing == 0.0 ? SolveMethod::LyapunovEigen
                                    : SolveMethod::SparseVectorized;
  if (method == SolveMethod::SparseVectorized && drive.dephasing == 0.0)
    throw InvalidArgumentError("SparseVectorized method requires Gamma > 0");

  const DriftInjection sys = build_drift_and_injection(spec, drive);

  NessSolution sol;
  sol.method_used = method;
  sol.covariance = method == SolveMethod::LyapunovEigen
                       ? lyapunov_eigen_solve(sys.drift, sys.injection)
                       : sparse_vectorized_solve(sys.drift, sys.injection, drive.dephasing);

  sol.residual = steady_state_residual(sys.drift, sys.injection, drive.dephasing,
                                       sol.covariance);
  const double threshold = options.residual_tolerance * std::max(drive.gamma, 1.0);
  if (!(sol.residual <= threshold))
    throw ResidualTooLargeError("steady-state residual " + std::to_string(sol.residual) +
                                " exceeds " + std::to_string(threshold));

  if (options.hermitize)
    sol.covariance = 0.5 * (sol.covariance + sol.covariance.adjoint()).eval();

  CurrentProfile profile = extract_currents(sol.covariance);
  sol.site_currents = std::move(profile.site_currents);
  sol.current = profile.current;
  sol.homogeneity = profile.homogeneity;
  std::tie(sol.boundary_in, sol.boundary_out) = boundary_currents(sol.covariance, drive);
  sol.density = sol.covariance.diagonal().real();
  return sol;
}

}  // namespace qpt

#include "qpt/liouville.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "qpt/errors.hpp"

namespace qpt {

namespace {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void check_size(int length) {
  if (length < 1) throw InvalidArgumentError("chain length must be positive");
  if (length > kMaxLiouvilleSites)
    throw SizeTooLargeError("dense generator limited to " +
                            std::to_string(kMaxLiouvilleSites) + " sites");
}

}  // namespace

Eigen::MatrixXcd fermion_lowering(int site, int length) {
  check_size(length);
  if (site < 1 || site > length)
    throw InvalidArgumentError("site index out of range");
  // Local basis (|0>, |1>): sigma^- = |0><1|, sigma^z = 2n - 1.
  Mat minus_z(2, 2), lower(2, 2), id2 = Mat::Identity(2, 2);
  minus_z << 1, 0, 0, -1;
  lower << 0, 1, 0, 0;
  Mat op = Mat::Identity(1, 1);
  for (int j = 1; j <= length; ++j) {
    if (j < site)
      op = kron(op, minus_z);
    else if (j == site)
      op = kron(op, lower);
    else
      op = kron(op, id2);
  }
  return op;
}

Eigen::MatrixXcd many_body_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  check_size(spec.length);
  const int L = spec.length;
  std::vector<Mat> c(static_cast<size_t>(L));
  for (int i = 0; i < L; ++i) c[static_cast<size_t>(i)] = fermion_lowering(i + 1, L);

  const Eigen::Index dim = Eigen::Index(1) << L;
  Mat H = Mat::Zero(dim, dim);
  for (int i = 0; i + 1 < L; ++i)
    H -= c[static_cast<size_t>(i)].adjoint() * c[static_cast<size_t>(i + 1)] +
         c[static_cast<size_t>(i + 1)].adjoint() * c[static_cast<size_t>(i)];
  const std::vector<double> v = potential_values(spec);
  for (int i = 0; i < L; ++i)
    H += spec.lambda * v[static_cast<size_t>(i)] *
         (c[static_cast<size_t>(i)].adjoint() * c[static_cast<size_t>(i)]);
  return H;
}

Eigen::MatrixXcd build_liouvillian(const ChainSpec& spec, const DriveSpec& drive) {
  spec.validate();
  drive.validate();
  check_size(spec.length);
  const int L = spec.length;
  const Eigen::Index dim = Eigen::Index(1) << L;
  const Mat id = Mat::Identity(dim, dim);

  std::vector<Mat> jumps;
  const Mat c1 = fermion_lowering(1, L);
  const Mat cL = fermion_lowering(L, L);
  jumps.push_back(std::sqrt(drive.gamma * (1.0 - drive.f1)) * c1);
  jumps.push_back(std::sqrt(drive.gamma * drive.f1) * c1.adjoint());
  jumps.push_back(std::sqrt(drive.gamma * (1.0 - drive.fL)) * cL);
  jumps.push_back(std::sqrt(drive.gamma * drive.fL) * cL.adjoint());
  if (drive.dephasing > 0.0) {
    for (int i = 1; i <= L; ++i) {
      const Mat c = fermion_lowering(i, L);
      jumps.push_back(std::sqrt(drive.dephasing) * (c.adjoint() * c));
    }
  }

  // Column-major vectorization: vec(A rho B) = (B^T kron A) vec(rho).
  const Mat H = many_body_hamiltonian(spec);
  Mat gen = cd(0, -1) * (kron(id, H) - kron(H.transpose(), id));
  for (const Mat& jump : jumps) {
    const Mat dd = jump.adjoint() * jump;
    gen += kron(jump.conjugate(), jump);
    gen -= 0.5 * kron(id, dd);
    gen -= 0.5 * kron(dd.transpose(), id);
  }
  return gen;
}

Eigen::MatrixXcd steady_state_dense(const Eigen::MatrixXcd& generator) {
  const Eigen::Index N = generator.rows();
  if (generator.cols() != N) throw InvalidArgumentError("generator must be square");
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(N))));
  if (dim * dim != N) throw InvalidArgumentError("generator dimension must be a square");

  // vec(identity) spans the left null space (trace preservation), so adding
  // the rank-one border c * t t^dag makes the system uniquely solvable for
  // the trace-one fixed point: (gen + c t t^dag) x = c t.
  Eigen::VectorXcd trace_vec = Eigen::VectorXcd::Zero(N);
  for (Eigen::Index i = 0; i < dim; ++i) trace_vec(i * dim + i) = 1.0;
  const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());

  Mat bordered = generator + scale * (trace_vec * trace_vec.adjoint());
  Eigen::PartialPivLU<Mat> lu(bordered);

  // Rank check through the pivot spread; a tiny pivot means the generator's
  // null space is not one-dimensional.
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pmax = pivots.maxCoeff();
  const double pmin = pivots.minCoeff();
  if (!(pmin > 1e6 * std::numeric_limits<double>::epsilon() * pmax))
    throw NonUniqueSteadyStateError("steady state is not unique (nullity gap below 1e6)");

  Eigen::VectorXcd x = lu.solve(scale * trace_vec);
  Mat rho = Eigen::Map<Mat>(x.data(), dim, dim);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return rho;
}

Eigen::MatrixXcd covariance_from_density(const Eigen::MatrixXcd& rho) {
  const Eigen::Index dim = rho.rows();
  int L = 0;
  while ((Eigen::Index(1) << (L + 1)) <= dim) ++L;
  if ((Eigen::Index(1) << L) != dim)
    throw InvalidArgumentError("density matrix dimension must be a power of two");
  check_size(L);

  std::vector<Mat> c(static_cast<size_t>(L));
  for (int i = 0; i < L; ++i) c[static_cast<size_t>(i)] = fermion_lowering(i + 1, L);

  Mat covariance(L, L);
  for (int j = 0; j < L; ++j) {
    const Mat left = rho * c[static_cast<size_t>(j)].adjoint();
    for (int i = 0; i < L; ++i)
      covariance(i, j) = (left * c[static_cast<size_t>(i)]).trace();
  }
  return covariance;
}

Eigen::MatrixXcd oracle_covariance(const ChainSpec& spec, const DriveSpec& drive) {
  return covariance_from_density(steady_state_dense(build_liouvillian(spec, drive)));
}

}  // namespace qpt

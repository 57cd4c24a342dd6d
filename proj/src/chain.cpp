#include "qpt/chain.hpp"

#include <cmath>

#include "qpt/errors.hpp"

namespace qpt {

namespace {
constexpr double kGoldenRatio = 1.6180339887498948482;
constexpr double kTwoPi = 6.2831853071795864769;
}  // namespace

const char* potential_model_name(PotentialModel model) {
  switch (model) {
    case PotentialModel::Clean: return "clean";
    case PotentialModel::Aah: return "aah";
    case PotentialModel::Fibonacci: return "fibonacci";
  }
  return "?";
}

PotentialModel potential_model_from_name(const std::string& name) {
  if (name == "clean") return PotentialModel::Clean;
  if (name == "aah") return PotentialModel::Aah;
  if (name == "fibonacci") return PotentialModel::Fibonacci;
  throw InvalidArgumentError("unknown potential model '" + name + "'");
}

PotentialKind PotentialKind::aah(double theta) {
  double reduced = std::fmod(theta, kTwoPi);
  if (reduced < 0) reduced += kTwoPi;
  return {PotentialModel::Aah, reduced};
}

void ChainSpec::validate() const {
  if (length < 2) throw InvalidArgumentError("chain length must be at least 2");
  if (!(lambda >= 0)) throw InvalidArgumentError("potential strength must be non-negative");
}

void DriveSpec::validate() const {
  if (!(gamma > 0)) throw InvalidArgumentError("bath coupling gamma must be positive");
  if (!(f1 >= 0 && f1 <= 1)) throw InvalidArgumentError("f1 must lie in [0, 1]");
  if (!(fL >= 0 && fL <= 1)) throw InvalidArgumentError("fL must lie in [0, 1]");
  if (!(dephasing >= 0)) throw InvalidArgumentError("dephasing strength must be non-negative");
}

double aah_potential(int site, double theta) {
  return 2.0 * std::cos(kTwoPi * kGoldenRatio * site + theta);
}

int fibonacci_potential(int site) {
  const double inv_g2 = 1.0 / (kGoldenRatio * kGoldenRatio);
  return static_cast<int>(std::floor((site + 1) * inv_g2)) -
         static_cast<int>(std::floor(site * inv_g2));
}

std::string fibonacci_word(int index) {
  if (index < 0) throw InvalidArgumentError("word index must be non-negative");
  std::string prev = "0";   // S_0
  if (index == 0) return prev;
  std::string cur = "01";   // S_1
  for (int n = 2; n <= index; ++n) {
    std::string next = cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> potential_values(const ChainSpec& spec) {
  spec.validate();
  std::vector<double> v(static_cast<size_t>(spec.length), 0.0);
  switch (spec.kind.model) {
    case PotentialModel::Clean:
      break;
    case PotentialModel::Aah:
      for (int i = 1; i <= spec.length; ++i)
        v[static_cast<size_t>(i - 1)] = aah_potential(i, spec.kind.theta);
      break;
    case PotentialModel::Fibonacci:
      for (int i = 1; i <= spec.length; ++i)
        v[static_cast<size_t>(i - 1)] = fibonacci_potential(i);
      break;
  }
  return v;
}

Eigen::MatrixXd build_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const int L = spec.length;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(L, L);
  for (int i = 0; i + 1 < L; ++i) {
    h(i, i + 1) = -1.0;
    h(i + 1, i) = -1.0;
  }
  const std::vector<double> v = potential_values(spec);
  for (int i = 0; i < L; ++i) h(i, i) = spec.lambda * v[static_cast<size_t>(i)];
  return h;
}

DriftInjection build_drift_and_injection(const ChainSpec& spec, const DriveSpec& drive) {
  drive.validate();
  const int L = spec.length;
  const Eigen::MatrixXd h = build_hamiltonian(spec);
  DriftInjection out;
  out.drift = std::complex<double>(0.0, 1.0) * h.cast<std::complex<double>>();
  out.drift(0, 0) += drive.gamma / 2.0;
  out.drift(L - 1, L - 1) += drive.gamma / 2.0;
  out.injection = Eigen::VectorXd::Zero(L);
  out.injection(0) = drive.gamma * drive.f1;
  out.injection(L - 1) = drive.gamma * drive.fL;
  return out;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::SizeTooLarge: return "SizeTooLarge";
    case ErrorCode::NonUniqueSteadyState: return "NonUniqueSteadyState";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::NonPositiveCurrent: return "NonPositiveCurrent";
    case ErrorCode::ZeroBias: return "ZeroBias";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace qpt

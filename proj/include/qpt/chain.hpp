#pragma once

// Chain construction: quasiperiodic on-site potentials, the single-particle
// hopping matrix, and the drift/injection matrices that drive the covariance
// equation of motion
//
//   dC/dt = -(W C + C W^dag) - Gamma * offdiag(C) + F,
//
// with W = i*h + (gamma/2)(P_1 + P_L) and F = diag(gamma*f1, 0, ..., 0, gamma*fL).

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qpt {

enum class PotentialModel { Clean, Aah, Fibonacci };

const char* potential_model_name(PotentialModel model);
PotentialModel potential_model_from_name(const std::string& name);

/// On-site potential selector. For the AAH model the phase is stored reduced
/// to [0, 2*pi).
struct PotentialKind {
  PotentialModel model = PotentialModel::Clean;
  double theta = 0.0;

  static PotentialKind clean() { return {PotentialModel::Clean, 0.0}; }
  static PotentialKind aah(double theta);
  static PotentialKind fibonacci() { return {PotentialModel::Fibonacci, 0.0}; }
};

struct ChainSpec {
  int length = 2;          // number of sites, >= 2
  double lambda = 0.0;     // potential strength, >= 0
  PotentialKind kind;

  void validate() const;   // throws InvalidArgumentError
};

struct DriveSpec {
  double gamma = 1.0;      // boundary bath coupling, > 0
  double f1 = 1.0;         // target occupation of the left bath, in [0, 1]
  double fL = 0.0;         // target occupation of the right bath, in [0, 1]
  double dephasing = 0.0;  // bulk dephasing strength Gamma, >= 0

  void validate() const;   // throws InvalidArgumentError
};

/// 2*cos(2*pi*g*i + theta) with g the golden ratio; sites are 1-based.
double aah_potential(int site, double theta);

/// i-th digit of the Fibonacci word, [(i+1)/g^2] - [i/g^2]; sites are 1-based.
int fibonacci_potential(int site);

/// Fibonacci word by concatenation: S_0 = "0", S_1 = "01", S_n = S_{n-1} + S_{n-2}.
/// Each word is a prefix of the next and its length is a Fibonacci number.
std::string fibonacci_word(int index);

/// V_i for i = 1..L.
std::vector<double> potential_values(const ChainSpec& spec);

/// Tridiagonal single-particle matrix: off-diagonal -1, diagonal lambda*V_i.
Eigen::MatrixXd build_hamiltonian(const ChainSpec& spec);

struct DriftInjection {
  Eigen::MatrixXcd drift;      // W, L x L
  Eigen::VectorXd injection;   // diagonal of F, length L
};

DriftInjection build_drift_and_injection(const ChainSpec& spec, const DriveSpec& drive);

}  // namespace qpt

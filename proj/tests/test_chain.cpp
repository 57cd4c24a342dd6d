#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qpt/chain.hpp"
#include "qpt/errors.hpp"

using namespace qpt;

TEST_CASE("aah potential values") {
  // 2*cos(2*pi*g), frozen from a 40-digit evaluation of the formula
  CHECK(aah_potential(1, 0.0) == doctest::Approx(-1.4747377561566398).epsilon(1e-12));
  CHECK(aah_potential(2, 0.0) == doctest::Approx(0.17485144943392080).epsilon(1e-12));
  CHECK(aah_potential(3, 1.5) == doctest::Approx(1.6693040663804155).epsilon(1e-12));

  for (int i = 1; i <= 500; ++i)
    for (double theta : {0.0, 0.4, 3.9}) {
      const double v = aah_potential(i, theta);
      CHECK(v >= -2.0);
      CHECK(v <= 2.0);
    }

  // periodicity in theta
  for (int i = 1; i <= 50; ++i)
    CHECK(aah_potential(i, 0.7) ==
          doctest::Approx(aah_potential(i, 0.7 + 2 * M_PI)).epsilon(1e-10));
}

TEST_CASE("fibonacci potential digits") {
  const int expected[8] = {0, 1, 0, 0, 1, 0, 1, 0};
  for (int i = 1; i <= 8; ++i) CHECK(fibonacci_potential(i) == expected[i - 1]);
  for (int i = 1; i <= 10000; ++i) {
    const int d = fibonacci_potential(i);
    CHECK((d == 0 || d == 1));
  }
}

TEST_CASE("fibonacci word recursion") {
  CHECK(fibonacci_word(0) == "0");
  CHECK(fibonacci_word(1) == "01");
  CHECK(fibonacci_word(2) == "010");
  CHECK(fibonacci_word(3) == "01001");
  CHECK(fibonacci_word(4) == "01001010");
  CHECK_THROWS_AS(fibonacci_word(-1), InvalidArgumentError);

  // each word is a prefix of the next
  for (int n = 0; n < 16; ++n) {
    const std::string a = fibonacci_word(n), b = fibonacci_word(n + 1);
    CHECK(b.substr(0, a.size()) == a);
  }

  // lengths follow the Fibonacci numbers: |S_n| = F_{n+2} with F_1 = F_2 = 1
  long f1 = 1, f2 = 1;  // F_1, F_2
  for (int n = 0; n <= 20; ++n) {
    CHECK(long(fibonacci_word(n).size()) == f2);  // F_{n+2}
    const long next = f1 + f2;
    f1 = f2;
    f2 = next;
  }
}

TEST_CASE("formula matches the recursive word") {
  const std::string word = fibonacci_word(16);
  REQUIRE(word.size() >= 2584);
  for (int i = 1; i <= 2584; ++i)
    CHECK(fibonacci_potential(i) == word[size_t(i - 1)] - '0');
}

TEST_CASE("potential kind normalization and validation") {
  CHECK(PotentialKind::aah(0.5).theta == doctest::Approx(0.5));
  CHECK(PotentialKind::aah(0.5 + 2 * M_PI).theta == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(PotentialKind::aah(-0.5).theta == doctest::Approx(2 * M_PI - 0.5).epsilon(1e-12));
  CHECK(PotentialKind::aah(-0.5).theta >= 0.0);
  CHECK(PotentialKind::aah(7.0).theta < 2 * M_PI);

  ChainSpec bad;
  bad.length = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgumentError);
  bad.length = 4;
  bad.lambda = -0.1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgumentError);

  DriveSpec drive;
  drive.gamma = 0.0;
  CHECK_THROWS_AS(drive.validate(), InvalidArgumentError);
  drive.gamma = 1.0;
  drive.f1 = 1.5;
  CHECK_THROWS_AS(drive.validate(), InvalidArgumentError);
  drive.f1 = 1.0;
  drive.dephasing = -1.0;
  CHECK_THROWS_AS(drive.validate(), InvalidArgumentError);
}

TEST_CASE("hamiltonian structure") {
  {
    ChainSpec spec{3, 0.0, PotentialKind::clean()};
    const Eigen::MatrixXd h = build_hamiltonian(spec);
    CHECK(h(0, 1) == -1.0);
    CHECK(h(1, 0) == -1.0);
    CHECK(h(1, 2) == -1.0);
    CHECK(h(0, 0) == 0.0);
    CHECK(h(1, 1) == 0.0);
    CHECK(h(0, 2) == 0.0);
  }
  {
    ChainSpec spec{3, 2.0, PotentialKind::fibonacci()};
    const Eigen::MatrixXd h = build_hamiltonian(spec);
    CHECK(h(0, 0) == 0.0);
    CHECK(h(1, 1) == 2.0);
    CHECK(h(2, 2) == 0.0);
  }
  {
    ChainSpec spec{34, 1.3, PotentialKind::aah(0.9)};
    const Eigen::MatrixXd h = build_hamiltonian(spec);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < spec.length; ++i)
      for (int j = 0; j < spec.length; ++j)
        if (std::abs(i - j) >= 2) CHECK(h(i, j) == 0.0);
    for (int i = 0; i < spec.length; ++i) CHECK(std::abs(h(i, i)) <= 2.0 * spec.lambda);
  }
}

TEST_CASE("drift and injection") {
  using cd = std::complex<double>;
  {
    ChainSpec spec{2, 0.0, PotentialKind::clean()};
    DriveSpec drive;  // gamma=1, f1=1, fL=0
    const DriftInjection sys = build_drift_and_injection(spec, drive);
    CHECK(sys.drift(0, 0) == cd(0.5, 0.0));
    CHECK(sys.drift(1, 1) == cd(0.5, 0.0));
    CHECK(sys.drift(0, 1) == cd(0.0, -1.0));
    CHECK(sys.drift(1, 0) == cd(0.0, -1.0));
    CHECK(sys.injection(0) == 1.0);
    CHECK(sys.injection(1) == 0.0);
  }
  {
    ChainSpec spec{13, 0.8, PotentialKind::aah(2.1)};
    DriveSpec drive{1.7, 0.9, 0.2, 0.0};
    const DriftInjection sys = build_drift_and_injection(spec, drive);
    // anti-Hermitian part is the Hamiltonian: W - W^dag = 2i h
    const Eigen::MatrixXcd anti = sys.drift - sys.drift.adjoint();
    const Eigen::MatrixXcd expected =
        cd(0, 2) * build_hamiltonian(spec).cast<cd>();
    CHECK((anti - expected).cwiseAbs().maxCoeff() < 1e-15);
    // F has exactly two nonzero entries when f1, fL > 0
    int nonzero = 0;
    for (int i = 0; i < spec.length; ++i)
      if (sys.injection(i) != 0.0) ++nonzero;
    CHECK(nonzero == 2);
    CHECK(sys.injection(0) == doctest::Approx(1.7 * 0.9));
    CHECK(sys.injection(12) == doctest::Approx(1.7 * 0.2));
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <uscsim/core.hpp>

using namespace uscsim;
using Catch::Approx;

TEST_CASE("layout dimensions and validation") {
  SystemLayout lay = SystemLayout::qubit_mode(5);
  REQUIRE(lay.total_dim() == 12);
  REQUIRE(lay.at(0).dim() == 2);
  REQUIRE(lay.at(1).dim() == 6);
  REQUIRE_THROWS_AS(lay.at(2), InvalidSubsystem);
  REQUIRE_THROWS_AS(Subsystem::mode(0), InvalidTruncation);
  REQUIRE(SystemLayout::qubits_mode(3, 4).total_dim() == 2 * 2 * 2 * 5);
}

TEST_CASE("ladder operators obey canonical commutation on the truncated space") {
  SystemLayout lay({Subsystem::mode(20)});
  const Mat a = make_destroy(lay, 0).matrix;
  const Mat comm = a * a.adjoint() - a.adjoint() * a;
  // [a, a^dag] = 1 except at the truncation edge
  for (int n = 0; n < 20; ++n) REQUIRE(std::real(comm(n, n)) == Approx(1.0));
  REQUIRE(std::real(comm(20, 20)) == Approx(-20.0));
  const Mat nop = make_number(lay, 0).matrix;
  REQUIRE(std::real(nop(7, 7)) == Approx(7.0));
}

TEST_CASE("Pauli algebra") {
  SystemLayout lay({Subsystem::qubit()});
  const Mat sx = make_pauli(lay, 0, 'x').matrix;
  const Mat sy = make_pauli(lay, 0, 'y').matrix;
  const Mat sz = make_pauli(lay, 0, 'z').matrix;
  REQUIRE((sx * sy - sy * sx - 2.0 * I * sz).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE((sx * sx - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  const Mat sp = make_pauli(lay, 0, '+').matrix;
  REQUIRE(((sx + I * sy) / 2.0 - sp).cwiseAbs().maxCoeff() < 1e-14);
  // sigma_z |e> = +|e>
  Vec e = basis_ket(lay, {1});
  REQUIRE(std::real(Complex(e.dot(sz * e))) == Approx(1.0));
}

TEST_CASE("embedding acts on the right subsystem") {
  SystemLayout lay = SystemLayout::qubit_mode(3);
  const Mat n_full = make_number(lay, 1).matrix;
  const Vec v = basis_ket(lay, {1, 2});
  REQUIRE(std::real(Complex(v.dot(n_full * v))) == Approx(2.0));
  REQUIRE_THROWS_AS(make_destroy(lay, 0), InvalidSubsystem);
  REQUIRE_THROWS_AS(make_pauli(lay, 1, 'z'), InvalidSubsystem);
}

TEST_CASE("parity operator squares to identity and labels the vacuum") {
  SystemLayout lay = SystemLayout::qubit_mode(8);
  const Mat p = parity_operator(lay, 0, 1).matrix;
  REQUIRE((p * p - Mat::Identity(lay.total_dim(), lay.total_dim())).cwiseAbs().maxCoeff() <
          1e-14);
  const Vec g0 = basis_ket(lay, {0, 0});
  REQUIRE(std::real(Complex(g0.dot(p * g0))) == Approx(-1.0));
  const Vec e0 = basis_ket(lay, {1, 0});
  REQUIRE(std::real(Complex(e0.dot(p * e0))) == Approx(1.0));
  const Vec g1 = basis_ket(lay, {0, 1});
  REQUIRE(std::real(Complex(g1.dot(p * g1))) == Approx(1.0));
}

TEST_CASE("expectation values for kets and density matrices agree") {
  SystemLayout lay = SystemLayout::qubit_mode(4);
  Vec psi = (basis_ket(lay, {0, 0}) + basis_ket(lay, {1, 2})) / std::sqrt(2.0);
  const QuantumState ks = QuantumState::from_ket(lay, psi);
  const QuantumState ds = QuantumState::from_density(lay, ks.density());
  const COperator n = make_number(lay, 1);
  REQUIRE(real_expectation(ks, n) == Approx(1.0));
  REQUIRE(real_expectation(ds, n) == Approx(1.0));
}

TEST_CASE("displaced vacuum has Poissonian photon statistics") {
  SystemLayout lay({Subsystem::mode(40)});
  const Complex beta{1.3, -0.4};
  const Vec psi = displaced_vacuum(lay, 0, beta);
  REQUIRE(std::abs(psi.norm() - 1.0) < 1e-12);
  const Mat nop = make_number(lay, 0).matrix;
  REQUIRE(std::real(Complex(psi.dot(nop * psi))) == Approx(std::norm(beta)).epsilon(1e-9));
  // p(0) = exp(-|beta|^2)
  REQUIRE(std::norm(psi(0)) == Approx(std::exp(-std::norm(beta))).epsilon(1e-9));
}

TEST_CASE("partial trace and entropy") {
  SystemLayout lay = SystemLayout::qubit_mode(3);
  // maximally entangled in a 2x2 block
  Vec psi = (basis_ket(lay, {0, 0}) + basis_ket(lay, {1, 1})) / std::sqrt(2.0);
  const QuantumState s = QuantumState::from_ket(lay, psi);
  const Mat rq = reduce_to_subsystem(s, 0);
  REQUIRE(std::abs(rq.trace().real() - 1.0) < 1e-12);
  REQUIRE(von_neumann_entropy(rq) == Approx(std::log(2.0)).epsilon(1e-9));
  // product state -> zero entropy
  Vec prod = basis_ket(lay, {1, 2});
  REQUIRE(von_neumann_entropy(reduce_to_subsystem(QuantumState::from_ket(lay, prod), 0)) <
          1e-12);
}

TEST_CASE("normalization is enforced at state construction") {
  SystemLayout lay = SystemLayout::qubit_mode(2);
  Vec bad = 2.0 * basis_ket(lay, {0, 0});
  REQUIRE_THROWS_AS(QuantumState::from_ket(lay, bad), NumericError);
}

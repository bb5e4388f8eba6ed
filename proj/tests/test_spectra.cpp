#include <catch2/catch_amalgamated.hpp>

#include <uscsim/spectra.hpp>

using namespace uscsim;
using Catch::Approx;

TEST_CASE("uncoupled resonant spectrum with deterministic degeneracy resolution") {
  const SystemLayout lay = SystemLayout::qubit_mode(20);
  const Eigensystem es = eigensystem(build_static(ModelSpec(QRM{1.0, 1.0, 0.0, +1}), lay));
  REQUIRE(es.energies(0) == Approx(-0.5));
  REQUIRE(es.energies(1) == Approx(0.5));
  REQUIRE(es.energies(2) == Approx(0.5));
  // degenerate pair resolved into parity eigenstates, +1 sector first
  REQUIRE(es.parity[1] == +1);
  REQUIRE(es.parity[2] == +1);
  // within equal parity, ascending photon number: |e,0> before |g,1>
  REQUIRE(es.photon(1) < es.photon(2));
  REQUIRE(es.parity[0] == -1);
}

TEST_CASE("vacuum Rabi splitting at weak coupling") {
  const SystemLayout lay = SystemLayout::qubit_mode(30);
  const double g = 0.1;
  const Eigensystem es = eigensystem(build_static(ModelSpec(QRM{1.0, 1.0, g, +1}), lay));
  const double split = es.energies(2) - es.energies(1);
  REQUIRE(split == Approx(2.0 * g).epsilon(0.05));
}

TEST_CASE("zero-splitting limit gives a displaced ladder") {
  const SystemLayout lay = SystemLayout::qubit_mode(90);
  const Eigensystem es = eigensystem(build_static(ModelSpec(QRM{0.0, 1.0, 2.0, +1}), lay));
  for (int n = 0; n < 4; ++n) {
    REQUIRE(es.energies(2 * n) == Approx(n - 4.0).margin(1e-6));
    REQUIRE(es.energies(2 * n + 1) == Approx(n - 4.0).margin(1e-6));
  }
}

TEST_CASE("every eigenstate of the full model carries a clean symmetry label") {
  const SystemLayout lay = SystemLayout::qubit_mode(24);
  const Eigensystem es = eigensystem(build_static(ModelSpec(QRM{0.7, 1.0, 0.6, +1}), lay));
  const Mat p = parity_operator(lay, 0, 1).matrix;
  for (int k = 0; k < 20; ++k) {
    REQUIRE(es.parity[static_cast<size_t>(k)] != 0);
    const Vec v = es.vectors.col(k);
    REQUIRE(std::abs(std::real(v.dot(p * v))) > 1.0 - 1e-6);
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  SystemLayout lay = SystemLayout::qubit_mode(3);
  COperator op = make_destroy(lay, 1);
  REQUIRE_THROWS_AS(eigensystem(op), NumericError);
}

TEST_CASE("eigenvalue convergence under truncation doubling") {
  const double Om = 1.0, w = 1.0, g = 0.6;
  const Eigensystem a =
      eigensystem(build_static(ModelSpec(QRM{Om, w, g, +1}), SystemLayout::qubit_mode(40)));
  const Eigensystem b =
      eigensystem(build_static(ModelSpec(QRM{Om, w, g, +1}), SystemLayout::qubit_mode(80)));
  for (int k = 0; k < 6; ++k) {
    const double rel = std::abs(a.energies(k) - b.energies(k)) /
                       std::max(1.0, std::abs(b.energies(k)));
    REQUIRE(rel <= 1e-8);
  }
}

TEST_CASE("coupling-regime classifier with upward boundary resolution") {
  REQUIRE(classify_regime(0.05, 1.0) == CouplingRegime::StrongRWA);
  REQUIRE(classify_regime(0.1, 1.0) == CouplingRegime::PerturbativeUSC);
  REQUIRE(classify_regime(0.12, 1.0) == CouplingRegime::PerturbativeUSC);
  REQUIRE(classify_regime(0.3, 1.0) == CouplingRegime::NonperturbativeUSC);
  REQUIRE(classify_regime(0.99, 1.0) == CouplingRegime::NonperturbativeUSC);
  REQUIRE(classify_regime(1.0, 1.0) == CouplingRegime::PerturbativeDSC);
  REQUIRE(classify_regime(1.34, 1.0) == CouplingRegime::PerturbativeDSC);
  REQUIRE_THROWS_AS(classify_regime(0.1, 0.0), InvalidSubsystem);
}

TEST_CASE("ground-state observables across coupling strengths") {
  const SystemLayout lay0 = SystemLayout::qubit_mode(20);
  const GroundStateProps p0 =
      ground_state_props(eigensystem(build_static(ModelSpec(QRM{1.0, 1.0, 0.0, +1}), lay0)));
  REQUIRE(p0.photon_number == Approx(0.0).margin(1e-12));
  REQUIRE(p0.qubit_entropy == Approx(0.0).margin(1e-10));
  REQUIRE(p0.quad_sq == Approx(1.0).epsilon(1e-10));

  const SystemLayout lay = SystemLayout::qubit_mode(90);
  const GroundStateProps pd =
      ground_state_props(eigensystem(build_static(ModelSpec(QRM{0.0, 1.0, 2.0, +1}), lay)));
  REQUIRE(pd.photon_number == Approx(4.0).margin(1e-6));

  const GroundStateProps pu = ground_state_props(
      eigensystem(build_static(ModelSpec(QRM{1.0, 1.0, 1.0, +1}), SystemLayout::qubit_mode(40))));
  REQUIRE(pu.photon_number > 0.0);
  REQUIRE(pu.qubit_entropy > 0.1);
}

TEST_CASE("probe shift reduces to the vacuum expression at zero host coupling") {
  AncillaProbe probe;
  probe.host = std::make_shared<ModelSpec>(Dicke{2, 1.0, 1.0, 0.0});
  probe.Omega_an = 3.0;
  probe.g_an = 0.02;
  const double shift = lamb_shift_perturbative(probe, 12);
  const double W = probe.Omega_an, w = 1.0;
  const double expected = probe.g_an * probe.g_an * 2.0 * W / (W * W - w * w);
  REQUIRE(shift == Approx(expected).epsilon(1e-9));
  // sign flips across the mode frequency
  probe.Omega_an = 0.5;
  REQUIRE(lamb_shift_perturbative(probe, 12) < 0.0);
  probe.Omega_an = 1.0;
  REQUIRE_THROWS_AS(lamb_shift_perturbative(probe, 12), SingularDetuning);
}

TEST_CASE("doublet splitting decays with coupling") {
  const double d10 = doublet_splitting(ProtectedDicke{1, 1.0, 1.0, 1.0}, 40).exact;
  const double d15 = doublet_splitting(ProtectedDicke{1, 1.0, 1.0, 1.5}, 40).exact;
  REQUIRE(d15 < d10);
  // g = 0: exact gap equals the smaller bare energy scale
  const DoubletSplitting d0 = doublet_splitting(ProtectedDicke{1, 1.0, 1.0, 0.0}, 10);
  REQUIRE(d0.exact == Approx(1.0).epsilon(1e-10));
  REQUIRE(d0.asymptotic == Approx(1.0));
  // exponent: ln(delta) vs g^2 slope within factor 2 of -2N/omega^2
  std::vector<double> gs = {1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  std::vector<double> lx, ly;
  for (double g : gs) {
    lx.push_back(g * g);
    ly.push_back(std::log(doublet_splitting(ProtectedDicke{1, 1.0, 1.0, g}, 70).exact));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(gs.size());
  for (int i = 0; i < n; ++i) { sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i]; }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  REQUIRE(slope < 0.0);
  REQUIRE(std::abs(slope) > 1.0);   // within factor 2 of -2
  REQUIRE(std::abs(slope) < 4.0);
}

TEST_CASE("transition table obeys the symmetry selection rule") {
  const SystemLayout lay = SystemLayout::qubit_mode(16);
  const Eigensystem es = eigensystem(build_static(ModelSpec(QRM{1.0, 1.0, 0.4, +1}), lay));
  const Mat a = make_destroy(lay, 1).matrix;
  const COperator x{lay, a + Mat(a.adjoint()), true};
  const auto table = transition_table(es, x, 1e-10);
  REQUIRE(!table.empty());
  for (const auto& t : table) {
    // matrix elements of the field quadrature connect opposite-parity states only
    REQUIRE(es.parity[static_cast<size_t>(t.from)] !=
            es.parity[static_cast<size_t>(t.to)]);
  }
}

TEST_CASE("numeric mode pull has the counter-rotating sign and magnitude") {
  // the full model pulls the photon-like transition below its RWA value
  const ModePull mp = dispersive_mode_pull(1.5, 1.0, 0.05, 20);
  REQUIRE(mp.pull < 0.0);
  const double predicted = bloch_siegert_shift(1.5, 1.0, 0.05);
  REQUIRE(std::abs(mp.pull) == Approx(predicted).epsilon(0.2));
}

#include <catch2/catch_amalgamated.hpp>

#include <uscsim/models.hpp>
#include <uscsim/spectra.hpp>

using namespace uscsim;
using Catch::Approx;

namespace {
double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("full model reduces to its rotating-wave form at weak coupling") {
  const SystemLayout lay = SystemLayout::qubit_mode(10);
  const Mat hq = build_static(ModelSpec(QRM{1.0, 1.0, 0.0, +1}), lay).matrix;
  const Mat hj = build_static(ModelSpec(JC{1.0, 1.0, 0.0}), lay).matrix;
  REQUIRE(max_abs(hq - hj) < 1e-14);
}

TEST_CASE("anisotropic model interpolates between the full and RWA forms") {
  const SystemLayout lay = SystemLayout::qubit_mode(8);
  const double g = 0.17;
  const Mat both = build_static(ModelSpec(AnisotropicRabi{1.0, 1.0, g, g}), lay).matrix;
  const Mat qrm = build_static(ModelSpec(QRM{1.0, 1.0, g, +1}), lay).matrix;
  REQUIRE(max_abs(both - qrm) < 1e-13);
  const Mat rot = build_static(ModelSpec(AnisotropicRabi{1.0, 1.0, g, 0.0}), lay).matrix;
  const Mat jc = build_static(ModelSpec(JC{1.0, 1.0, g}), lay).matrix;
  REQUIRE(max_abs(rot - jc) < 1e-13);
}

TEST_CASE("commutation with parity holds for the full model") {
  const SystemLayout lay = SystemLayout::qubit_mode(12);
  const Mat h = build_static(ModelSpec(QRM{0.8, 1.0, 0.4, +1}), lay).matrix;
  const Mat p = parity_operator(lay, 0, 1).matrix;
  REQUIRE(max_abs(h * p - p * h) < 1e-12);
}

TEST_CASE("dispersive reduction eigenvalues") {
  const SystemLayout lay = SystemLayout::qubit_mode(6);
  // ACStark is diagonal in |q, n>
  const double Om = 1.5, w = 1.0, g = 0.05;
  const double chi = g * g / (Om - w);
  const Mat h = build_static(ModelSpec(ACStark{Om, w, g}), lay).matrix;
  const Vec e1 = basis_ket(lay, {1, 3});
  REQUIRE(std::real(Complex(e1.dot(h * e1))) ==
          Approx(0.5 * (Om + chi) + 3.0 * (w + chi)).epsilon(1e-12));
  REQUIRE_THROWS_AS(build_static(ModelSpec(ACStark{1.0, 1.0, 0.1}), lay), SingularDetuning);
}

TEST_CASE("collective models: single-qubit case matches the two-level forms") {
  const SystemLayout lay = SystemLayout::qubits_mode(1, 8);
  const SystemLayout qm = SystemLayout::qubit_mode(8);
  const double g = 0.3;
  const Mat dicke = build_static(ModelSpec(Dicke{1, 1.0, 1.0, g}), lay).matrix;
  const Mat qrm = build_static(ModelSpec(QRM{1.0, 1.0, g, +1}), qm).matrix;
  // Dicke uses Omega*Jz = (Omega/2) sz: same as the two-level model
  REQUIRE(max_abs(dicke - qrm) < 1e-13);
  const Mat tc = build_static(ModelSpec(TavisCummings{1, 1.0, 1.0, g}), lay).matrix;
  const Mat jc = build_static(ModelSpec(JC{1.0, 1.0, g}), qm).matrix;
  REQUIRE(max_abs(tc - jc) < 1e-13);
  // Hopfield adds the quadratic photon term
  const Mat hop = build_static(ModelSpec(Hopfield{1, 1.0, 1.0, g}), lay).matrix;
  const Mat a = make_destroy(qm, 1).matrix;
  const Mat x = a + Mat(a.adjoint());
  REQUIRE(max_abs(hop - qrm - (g * g) * x * x) < 1e-13);
}

TEST_CASE("driven builder is Hermitian at arbitrary times and reduces correctly") {
  const SystemLayout lay = SystemLayout::qubit_mode(6);
  DrivenJC d;
  d.Omega = 1.0; d.omega = 1.0; d.g = 0.05;
  d.Omega_1 = 0.25; d.omega_1 = 1.0;
  d.Omega_2 = 0.025; d.omega_2 = 0.5;
  auto h = build_driven(ModelSpec(d), lay);
  for (double t : {0.0, 0.37, 2.9}) {
    const Mat m = h(t);
    REQUIRE(max_abs(m - m.adjoint()) < 1e-12);
  }
  // zero drive amplitudes: reduces to the JC form with the -g sign
  DrivenJC d0 = d;
  d0.Omega_1 = d0.Omega_2 = 0.0;
  const Mat m = build_driven(ModelSpec(d0), lay)(1.234);
  const Mat jc = build_static(ModelSpec(JC{1.0, 1.0, -0.05}), lay).matrix;
  REQUIRE(max_abs(m - jc) < 1e-13);
}

TEST_CASE("effective reduction of the two-tone driven system") {
  DrivenJC d;
  const double g = 0.02;
  d.Omega = d.omega = 20.0 * g;
  d.g = g;
  d.Omega_1 = 5.0 * g;
  d.omega_1 = d.omega - g / 2.0;  // omega_eff = g/2
  d.omega_2 = d.omega_1 - 2.0 * d.Omega_1;
  d.Omega_2 = g / 2.0;
  const QRM q = effective_qrm_of_driven(d);
  REQUIRE(q.Omega == Approx(d.Omega_2));
  REQUIRE(q.omega == Approx(g / 2.0));
  REQUIRE(q.g == Approx(g / 2.0));
  // detuned drive: omega=10, omega_1=9.9 with Omega_2 = 0.05 gives the
  // deep-strong point g_eff/omega_eff = 0.5
  DrivenJC d2;
  d2.Omega = d2.omega_1 = 9.9;
  d2.omega = 10.0;
  d2.g = 0.1;
  d2.Omega_2 = 0.05;
  d2.Omega_1 = 1.0;
  d2.omega_2 = d2.omega_1 - 2.0 * d2.Omega_1;
  const QRM q2 = effective_qrm_of_driven(d2);
  REQUIRE(q2.Omega == Approx(0.05));
  REQUIRE(q2.omega == Approx(0.1));
  REQUIRE(q2.g == Approx(0.05));
  // degenerate-mode limit omega_1 = omega is accepted (omega_eff = 0)
  d.omega_1 = d.omega;
  d.omega_2 = d.omega_1 - 2.0 * d.Omega_1;
  REQUIRE(effective_qrm_of_driven(d).omega == Approx(0.0).margin(1e-15));
  d.omega_2 += 0.1;
  REQUIRE_THROWS_AS(effective_qrm_of_driven(d), ResonanceMismatch);
}

TEST_CASE("lattice-parameter map") {
  ColdAtomParams p;
  p.lattice_depth_V = 3.0;
  p.trap_frequency = 2.0;
  p.lattice_k0 = 1.5;
  p.mass = 1.0;
  p.hbar = 1.0;
  const QRM q = cold_atom_map(p);
  REQUIRE(q.Omega == Approx(1.5));
  REQUIRE(q.omega == Approx(2.0));
  REQUIRE(q.g == Approx(2.0 * 1.5 * std::sqrt(1.0)));
  p.trap_frequency = -1.0;
  REQUIRE_THROWS_AS(cold_atom_map(p), InvalidSubsystem);
}

TEST_CASE("digital split pieces sum to the target Hamiltonian") {
  const SystemLayout lay = SystemLayout::qubit_mode(10);
  const QRM target{1.0, 2.0, 0.8, +1};
  const DigitalSplit s = digital_split(target);
  REQUIRE(s.mode_freq == Approx(1.0));
  REQUIRE(s.qubit_freq_1 - s.qubit_freq_2 == Approx(target.Omega));
  const Mat h1 = digital_piece_h1(s, lay);
  const Mat h2 = digital_piece_h2(s, lay);
  const Mat h = build_static(ModelSpec(target), lay).matrix;
  REQUIRE(max_abs(h1 + h2 - h) < 1e-12);
}

TEST_CASE("probe-augmented model embeds the host and adds probe terms") {
  AncillaProbe probe;
  probe.host = std::make_shared<ModelSpec>(Dicke{2, 1.0, 1.0, 0.3});
  probe.Omega_an = 3.0;
  probe.g_an = 0.02;
  const ModelSpec spec{probe};
  const SystemLayout lay = default_layout(spec, 6);
  REQUIRE(lay.size() == 4);  // 2 host qubits + probe + mode
  REQUIRE(ancilla_index(probe, lay) == 2);
  const Mat h = build_static(spec, lay).matrix;
  REQUIRE(max_abs(h - h.adjoint()) < 1e-12);
  // probe decoupled: spectrum = host spectrum +- Omega_an/2
  AncillaProbe decoupled = probe;
  decoupled.g_an = 0.0;
  const Mat h0 = build_static(ModelSpec(decoupled), lay).matrix;
  const SystemLayout host_lay = default_layout(*probe.host, 6);
  const Mat hh = build_static(*probe.host, host_lay).matrix;
  Eigen::SelfAdjointEigenSolver<Mat> e_full(h0), e_host(hh);
  REQUIRE(e_full.eigenvalues()(0) ==
          Approx(e_host.eigenvalues()(0) - 0.5 * probe.Omega_an).epsilon(1e-10));
}

TEST_CASE("JSON round trip preserves every parameter") {
  ModelSpec spec{TwoAtomRabi{1.0, 2.0, 0.1, std::acos(std::sqrt(2.0 / 3.0))}};
  nlohmann::json j;
  to_json(j, spec);
  ModelSpec back;
  from_json(j, back);
  const auto& m = std::get<TwoAtomRabi>(back.v);
  REQUIRE(m.theta == Approx(std::acos(std::sqrt(2.0 / 3.0))));
  REQUIRE(j.at("type") == "TwoAtomRabi");

  // nested probe spec
  AncillaProbe probe;
  probe.host = std::make_shared<ModelSpec>(Hopfield{3, 1.0, 1.0, 0.4});
  probe.Omega_an = 3.0;
  probe.g_an = 0.02;
  nlohmann::json jp;
  to_json(jp, ModelSpec{probe});
  ModelSpec probe_back;
  from_json(jp, probe_back);
  const auto& pb = std::get<AncillaProbe>(probe_back.v);
  REQUIRE(std::get<Hopfield>(pb.host->v).N == 3);
  REQUIRE(pb.g_an == Approx(0.02));

  nlohmann::json bad = {{"type", "Nonsense"}};
  ModelSpec tmp;
  REQUIRE_THROWS_AS(from_json(bad, tmp), ParseError);
}

#pragma once
// Hamiltonian families: light-matter models at arbitrary coupling strength,
// their approximate reductions, drives, parameter maps, and JSON (de)serialization.

#include <functional>
#include <memory>
#include <variant>

#include <nlohmann/json.hpp>

#include "core.hpp"

namespace uscsim {

// ------------------------------------------------------------ model structs
// All frequencies/couplings are angular frequencies in a common unit
// (internally dimensionless; hbar = 1).

struct QRM {  // full quantum Rabi model
  double Omega = 1.0;  // qubit splitting
  double omega = 1.0;  // mode frequency
  double g = 0.0;      // transverse coupling
  int sign = +1;       // sign convention on the coupling term: +g or -g
};

struct JC {  // rotating-wave reduction
  double Omega = 1.0;
  double omega = 1.0;
  double g = 0.0;
};

struct ACStark {  // dispersive JC reduction
  double Omega = 1.0;
  double omega = 1.0;
  double g = 0.0;
};

struct BlochSiegert {  // dispersive reduction retaining counter-rotating shift
  double Omega = 1.0;
  double omega = 1.0;
  double g = 0.0;
};

struct AnisotropicRabi {  // independent co- and counter-rotating couplings
  double Omega = 1.0;
  double omega = 1.0;
  double g_rot = 0.0;
  double g_counter = 0.0;
};

struct Dicke {  // N qubits, collective transverse coupling g/sqrt(N)
  int N = 1;
  double Omega = 1.0;
  double omega = 1.0;
  double g = 0.0;
};

struct TavisCummings {  // rotating-wave Dicke
  int N = 1;
  double Omega = 1.0;
  double omega = 1.0;
  double g = 0.0;
};

struct Hopfield {  // Dicke plus diamagnetic term D*(a+adag)^2, D = g^2/Omega
  int N = 1;
  double Omega = 1.0;
  double omega = 1.0;
  double g = 0.0;
};

struct TwoAtomRabi {  // two qubits, mixed transverse/longitudinal coupling angle
  double Omega = 1.0;
  double omega = 1.0;
  double g = 0.0;
  double theta = 0.0;  // coupling operator cos(theta) sx + sin(theta) sz
};

struct JahnTellerEe {  // one qubit, two degenerate modes, phase-tagged couplings
  double Omega_q = 1.0;
  double omega_c = 1.0;
  double lambda = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

struct HerzbergTeller {  // one qubit, two modes, sigma_x coupling + mode hopping
  double Omega_q = 1.0;
  double Omega_1 = 1.0;
  double Omega_2 = 1.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double J = 0.0;
};

struct OptomechPair {  // two optomechanical cells, photon hopping between them
  double omega_R = 1.0;  // optical mode
  double omega_M = 1.0;  // mechanical mode
  double g_M = 0.0;      // radiation-pressure coupling
  double g_R = 0.0;      // photon hopping
};

struct LongitudinalTwoQubit {  // two qubits, switchable longitudinal couplings
  double Omega_1 = 1.0;
  double Omega_2 = 1.0;
  double omega = 1.0;
  double g1 = 0.0;
  double g2 = 0.0;
  int s1 = +1;  // coupling sign switches
  int s2 = +1;
};

struct ProtectedDicke {  // Dicke variant with i(g/sqrt(N))(a - adag) coupling
  int N = 1;
  double Omega = 1.0;
  double omega = 1.0;
  double g = 0.0;
};

struct DrivenJC {  // JC with two qubit drives and optional cavity drive
  double Omega = 1.0;
  double omega = 1.0;
  double g = 0.0;
  double Omega_1 = 0.0;  // dressing-drive amplitude
  double omega_1 = 0.0;  // dressing-drive frequency
  double Omega_2 = 0.0;  // probe-drive amplitude
  double omega_2 = 0.0;  // probe-drive frequency
  double phi = 0.0;      // common drive phase
  double xi = 0.0;       // cavity drive amplitude (at frequency omega)
};

struct DiracEffective {  // 1D Dirac-particle analog in a qubit-mode register
  double lambda = 0.0;  // rest-energy scale (mass term coefficient on sigma_z is lambda/2)
  double g = 0.0;       // kinetic coupling; velocity scale is g/sqrt(2)
  double xi = 0.0;      // linear-potential slope (term xi*sqrt(2)*x)
};

struct ModelSpec;  // fwd

struct AncillaProbe {  // any host model plus a weakly coupled two-level probe
  std::shared_ptr<ModelSpec> host;
  double Omega_an = 1.0;  // probe splitting
  double g_an = 0.0;      // probe-mode transverse coupling
  double Omega_d = 0.0;   // classical probe drive amplitude
  double omega_d = 0.0;   // classical probe drive frequency
};

using ModelVariant =
    std::variant<QRM, JC, ACStark, BlochSiegert, AnisotropicRabi, Dicke, TavisCummings,
                 Hopfield, TwoAtomRabi, JahnTellerEe, HerzbergTeller, OptomechPair,
                 LongitudinalTwoQubit, ProtectedDicke, DrivenJC, DiracEffective, AncillaProbe>;

struct ModelSpec {
  ModelVariant v;
  ModelSpec() = default;
  template <class T>
  ModelSpec(T m) : v(std::move(m)) {}
};

// ------------------------------------------------------------ layouts
// Canonical subsystem ordering: qubits first (ancilla last among qubits),
// then boson modes.
inline SystemLayout default_layout(const ModelSpec& spec, int n_max) {
  return std::visit(
      [&](const auto& m) -> SystemLayout {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Dicke> || std::is_same_v<T, TavisCummings> ||
                      std::is_same_v<T, Hopfield> || std::is_same_v<T, ProtectedDicke>) {
          return SystemLayout::qubits_mode(m.N, n_max);
        } else if constexpr (std::is_same_v<T, TwoAtomRabi> ||
                             std::is_same_v<T, LongitudinalTwoQubit>) {
          return SystemLayout::qubits_mode(2, n_max);
        } else if constexpr (std::is_same_v<T, JahnTellerEe> ||
                             std::is_same_v<T, HerzbergTeller>) {
          return SystemLayout(
              {Subsystem::qubit(), Subsystem::mode(n_max), Subsystem::mode(n_max)});
        } else if constexpr (std::is_same_v<T, OptomechPair>) {
          // optical 1, mech 1, optical 2, mech 2
          return SystemLayout({Subsystem::mode(n_max), Subsystem::mode(n_max),
                               Subsystem::mode(n_max), Subsystem::mode(n_max)});
        } else if constexpr (std::is_same_v<T, AncillaProbe>) {
          SystemLayout host = default_layout(*m.host, n_max);
          std::vector<Subsystem> subs;
          // insert ancilla qubit after host qubits, before host modes
          size_t insert_at = 0;
          for (const auto& s : host.subsystems()) {
            if (s.kind == Subsystem::Kind::Qubit) ++insert_at; else break;
          }
          subs = host.subsystems();
          subs.insert(subs.begin() + static_cast<long>(insert_at), Subsystem::qubit());
          return SystemLayout(std::move(subs));
        } else {
          return SystemLayout::qubit_mode(n_max);
        }
      },
      spec.v);
}

// index of the ancilla qubit within default_layout(AncillaProbe)
inline int ancilla_index(const AncillaProbe& m, const SystemLayout& lay) {
  (void)lay;
  SystemLayout host = default_layout(*m.host, 2);
  int nq = 0;
  for (const auto& s : host.subsystems())
    if (s.kind == Subsystem::Kind::Qubit) ++nq;
  return nq;  // ancilla sits right after the host qubits
}

// ------------------------------------------------------------ static builder
int mode_count(const ModelSpec& spec);
int host_probe_mode_offset(const ModelSpec&);
SystemLayout strip_ancilla_layout(const AncillaProbe& m, const SystemLayout& lay);
Mat embed_host(const AncillaProbe& m, const SystemLayout& lay, const Mat& host_op);
COperator build_static(const ModelSpec& spec, const SystemLayout& lay);

namespace detail {

inline void require_layout(const SystemLayout& lay, const SystemLayout& expect,
                           const char* name) {
  if (lay != expect)
    throw LayoutMismatch(std::string("layout does not match model '") + name + "'");
}

inline Mat qrm_matrix(const SystemLayout& lay, double Omega, double omega, double g, int sign) {
  const Mat sz = make_pauli(lay, 0, 'z').matrix;
  const Mat sx = make_pauli(lay, 0, 'x').matrix;
  const Mat a = make_destroy(lay, 1).matrix;
  const Mat x = a + Mat(a.adjoint());
  return 0.5 * Omega * sz + omega * Mat(a.adjoint() * a) + static_cast<double>(sign) * g * sx * x;
}

}  // namespace detail

// Time-independent Hamiltonian as a COperator on the given layout.
inline COperator build_static(const ModelSpec& spec, const SystemLayout& lay) {
  using detail::require_layout;
  Mat h;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, QRM>) {
          require_layout(lay, SystemLayout::qubit_mode(lay.at(1).n_max), "QRM");
          h = detail::qrm_matrix(lay, m.Omega, m.omega, m.g, m.sign);
        } else if constexpr (std::is_same_v<T, JC>) {
          const Mat sz = make_pauli(lay, 0, 'z').matrix;
          const Mat sp = make_pauli(lay, 0, '+').matrix;
          const Mat a = make_destroy(lay, 1).matrix;
          h = 0.5 * m.Omega * sz + m.omega * Mat(a.adjoint() * a) +
              m.g * (sp * a + Mat((sp * a).adjoint()));
        } else if constexpr (std::is_same_v<T, ACStark>) {
          const double delta = m.Omega - m.omega;
          if (std::abs(delta) < 1e-12)
            throw SingularDetuning("ACStark requires Omega != omega");
          const double chi = m.g * m.g / delta;
          const Mat sz = make_pauli(lay, 0, 'z').matrix;
          const Mat a = make_destroy(lay, 1).matrix;
          const Mat n = a.adjoint() * a;
          h = 0.5 * (m.Omega + chi) * sz + m.omega * n + chi * sz * n;
        } else if constexpr (std::is_same_v<T, BlochSiegert>) {
          const double wbs = m.g * m.g / (m.omega + m.Omega);
          const Mat sz = make_pauli(lay, 0, 'z').matrix;
          const Mat sp = make_pauli(lay, 0, '+').matrix;
          const Mat sm = make_pauli(lay, 0, '-').matrix;
          const Mat a = make_destroy(lay, 1).matrix;
          const Mat n = a.adjoint() * a;
          const int d = lay.total_dim();
          // photon-number-dependent coupling, evaluated at the lower photon index
          Mat gn = Mat::Identity(d, d);
          gn = -m.g * (Mat::Identity(d, d) - (wbs / (m.omega + m.Omega)) * n);
          Mat coup = sm * Mat(a.adjoint()) * gn + gn * sp * a;
          h = 0.5 * (m.Omega + wbs) * sz + m.omega * n + wbs * sz * n -
              0.5 * wbs * Mat::Identity(d, d) + coup;
        } else if constexpr (std::is_same_v<T, AnisotropicRabi>) {
          const Mat sz = make_pauli(lay, 0, 'z').matrix;
          const Mat sp = make_pauli(lay, 0, '+').matrix;
          const Mat a = make_destroy(lay, 1).matrix;
          const Mat rot = sp * a;
          const Mat ctr = sp * Mat(a.adjoint());
          h = 0.5 * m.Omega * sz + m.omega * Mat(a.adjoint() * a) +
              m.g_rot * (rot + Mat(rot.adjoint())) + m.g_counter * (ctr + Mat(ctr.adjoint()));
        } else if constexpr (std::is_same_v<T, Dicke> || std::is_same_v<T, TavisCummings> ||
                             std::is_same_v<T, Hopfield>) {
          const int N = m.N;
          require_layout(lay, SystemLayout::qubits_mode(N, lay.at(N).n_max), "collective model");
          const int mode = N;
          const Mat a = make_destroy(lay, mode).matrix;
          const int d = lay.total_dim();
          Mat jz = Mat::Zero(d, d), jp = Mat::Zero(d, d);
          for (int q = 0; q < N; ++q) {
            jz += 0.5 * make_pauli(lay, q, 'z').matrix;
            jp += make_pauli(lay, q, '+').matrix;
          }
          const Mat jm = jp.adjoint();
          const double gc = m.g / std::sqrt(static_cast<double>(N));
          h = m.omega * Mat(a.adjoint() * a) + m.Omega * jz;
          if constexpr (std::is_same_v<T, TavisCummings>) {
            h += gc * (a * jp + Mat(a.adjoint()) * jm);
          } else {
            const Mat x = a + Mat(a.adjoint());
            h += gc * x * (jp + jm);
            if constexpr (std::is_same_v<T, Hopfield>) {
              h += (m.g * m.g / m.Omega) * x * x;
            }
          }
        } else if constexpr (std::is_same_v<T, TwoAtomRabi>) {
          require_layout(lay, SystemLayout::qubits_mode(2, lay.at(2).n_max), "TwoAtomRabi");
          const Mat a = make_destroy(lay, 2).matrix;
          const Mat x = a + Mat(a.adjoint());
          h = m.omega * Mat(a.adjoint() * a);
          for (int q = 0; q < 2; ++q) {
            const Mat sz = make_pauli(lay, q, 'z').matrix;
            const Mat sx = make_pauli(lay, q, 'x').matrix;
            h += 0.5 * m.Omega * sz + m.g * x * (std::cos(m.theta) * sx + std::sin(m.theta) * sz);
          }
        } else if constexpr (std::is_same_v<T, JahnTellerEe>) {
          const Mat sz = make_pauli(lay, 0, 'z').matrix;
          const Mat sp = make_pauli(lay, 0, '+').matrix;
          const Mat sm = make_pauli(lay, 0, '-').matrix;
          const Mat a = make_destroy(lay, 1).matrix;
          const Mat b = make_destroy(lay, 2).matrix;
          const Mat xa = a + Mat(a.adjoint());
          const Mat xb = b + Mat(b.adjoint());
          h = m.omega_c * Mat(a.adjoint() * a + b.adjoint() * b) + 0.5 * m.Omega_q * sz +
              m.lambda * (xa * (std::exp(-I * m.theta) * sp + std::exp(I * m.theta) * sm) +
                          xb * (std::exp(-I * m.phi) * sp + std::exp(I * m.phi) * sm));
        } else if constexpr (std::is_same_v<T, HerzbergTeller>) {
          const Mat sz = make_pauli(lay, 0, 'z').matrix;
          const Mat sx = make_pauli(lay, 0, 'x').matrix;
          const Mat a1 = make_destroy(lay, 1).matrix;
          const Mat a2 = make_destroy(lay, 2).matrix;
          h = 0.5 * m.Omega_q * sz + m.Omega_1 * Mat(a1.adjoint() * a1) +
              m.Omega_2 * Mat(a2.adjoint() * a2) +
              (m.g1 * (a1 + Mat(a1.adjoint())) + m.g2 * (a2 + Mat(a2.adjoint()))) * sx +
              m.J * Mat(a1.adjoint() * a2 + a2.adjoint() * a1);
        } else if constexpr (std::is_same_v<T, OptomechPair>) {
          const Mat a1 = make_destroy(lay, 0).matrix;
          const Mat b1 = make_destroy(lay, 1).matrix;
          const Mat a2 = make_destroy(lay, 2).matrix;
          const Mat b2 = make_destroy(lay, 3).matrix;
          h = m.omega_R * Mat(a1.adjoint() * a1 + a2.adjoint() * a2) +
              m.omega_M * Mat(b1.adjoint() * b1 + b2.adjoint() * b2) +
              m.g_M * (Mat(a1.adjoint() * a1) * (b1 + Mat(b1.adjoint())) +
                       Mat(a2.adjoint() * a2) * (b2 + Mat(b2.adjoint()))) +
              m.g_R * Mat(a1.adjoint() * a2 + a2.adjoint() * a1);
        } else if constexpr (std::is_same_v<T, LongitudinalTwoQubit>) {
          const Mat a = make_destroy(lay, 2).matrix;
          const Mat x = a + Mat(a.adjoint());
          const Mat sz1 = make_pauli(lay, 0, 'z').matrix;
          const Mat sz2 = make_pauli(lay, 1, 'z').matrix;
          h = 0.5 * m.Omega_1 * sz1 + 0.5 * m.Omega_2 * sz2 + m.omega * Mat(a.adjoint() * a) -
              static_cast<double>(m.s1) * m.g1 * sz1 * x -
              static_cast<double>(m.s2) * m.g2 * sz2 * x;
        } else if constexpr (std::is_same_v<T, ProtectedDicke>) {
          const int N = m.N;
          const Mat a = make_destroy(lay, N).matrix;
          const Mat p = I * (Mat(a.adjoint()) - a);  // i(a^dag - a), Hermitian
          const int d = lay.total_dim();
          Mat sxsum = Mat::Zero(d, d), szsum = Mat::Zero(d, d);
          for (int q = 0; q < N; ++q) {
            sxsum += make_pauli(lay, q, 'x').matrix;
            szsum += make_pauli(lay, q, 'z').matrix;
          }
          h = m.omega * Mat(a.adjoint() * a) + 0.5 * m.Omega * szsum -
              (m.g / std::sqrt(static_cast<double>(N))) * p * sxsum;
        } else if constexpr (std::is_same_v<T, DiracEffective>) {
          const Mat sz = make_pauli(lay, 0, 'z').matrix;
          const Mat sy = make_pauli(lay, 0, 'y').matrix;
          const Mat a = make_destroy(lay, 1).matrix;
          const Mat xq = (a + Mat(a.adjoint())) / std::sqrt(2.0);
          const Mat pq = -I * (a - Mat(a.adjoint())) / std::sqrt(2.0);
          h = 0.5 * m.lambda * sz + (m.g / std::sqrt(2.0)) * sy * pq +
              m.xi * std::sqrt(2.0) * xq;
        } else if constexpr (std::is_same_v<T, DrivenJC>) {
          throw InvalidSubsystem(
              "DrivenJC is time dependent; use build_driven or effective_qrm_of_driven");
        } else if constexpr (std::is_same_v<T, AncillaProbe>) {
          if (m.Omega_d != 0.0)
            throw InvalidSubsystem("driven AncillaProbe is time dependent; use build_driven");
          h = build_static(*m.host, strip_ancilla_layout(m, lay)).matrix;
          // embed host into the full space and add the probe terms
          h = embed_host(m, lay, h);
          const int ai = ancilla_index(m, lay);
          const int mode = lay.size() - mode_count(*m.host) +
                           host_probe_mode_offset(*m.host);
          const Mat a = make_destroy(lay, mode).matrix;
          h += 0.5 * m.Omega_an * make_pauli(lay, ai, 'z').matrix +
               m.g_an * (a + Mat(a.adjoint())) * make_pauli(lay, ai, 'x').matrix;
        }
      },
      spec.v);
  return {lay, std::move(h), true};
}

// --- ancilla helpers -------------------------------------------------------
inline int mode_count(const ModelSpec& spec) {
  SystemLayout l = default_layout(spec, 2);
  int c = 0;
  for (const auto& s : l.subsystems())
    if (s.kind == Subsystem::Kind::BosonMode) ++c;
  return c;
}
inline int host_probe_mode_offset(const ModelSpec&) { return 0; }  // probe couples to first mode

inline SystemLayout strip_ancilla_layout(const AncillaProbe& m, const SystemLayout& lay) {
  const int ai = ancilla_index(m, lay);
  std::vector<Subsystem> subs = lay.subsystems();
  if (ai >= static_cast<int>(subs.size()) || subs[static_cast<size_t>(ai)].kind != Subsystem::Kind::Qubit)
    throw LayoutMismatch("layout does not contain the ancilla qubit where expected");
  subs.erase(subs.begin() + ai);
  return SystemLayout(std::move(subs));
}

// Embed a host-space operator into the full (host + ancilla) space, identity
// on the ancilla. Host ordering: qubits ... then modes; ancilla sits between.
inline Mat embed_host(const AncillaProbe& m, const SystemLayout& lay, const Mat& host_op) {
  const int ai = ancilla_index(m, lay);
  int left_dim = 1;
  for (int i = 0; i < ai; ++i) left_dim *= lay.at(i).dim();
  int right_dim = 1;
  for (int i = ai + 1; i < lay.size(); ++i) right_dim *= lay.at(i).dim();
  // host_op lives on (left (x) right); we need left (x) I2 (x) right.
  const int hd = left_dim * right_dim;
  if (host_op.rows() != hd) throw LayoutMismatch("host operator dimension mismatch");
  Mat out = Mat::Zero(hd * 2, hd * 2);
  for (int lr = 0; lr < left_dim; ++lr)
    for (int lc = 0; lc < left_dim; ++lc)
      for (int q = 0; q < 2; ++q)
        for (int rr = 0; rr < right_dim; ++rr)
          for (int rc = 0; rc < right_dim; ++rc) {
            const int row = (lr * 2 + q) * right_dim + rr;
            const int col = (lc * 2 + q) * right_dim + rc;
            out(row, col) = host_op(lr * right_dim + rr, lc * right_dim + rc);
          }
  return out;
}

// ------------------------------------------------------------ driven builder
using HamiltonianFn = std::function<Mat(double)>;

// Time-dependent Hamiltonian H(t) in the lab frame.
inline HamiltonianFn build_driven(const ModelSpec& spec, const SystemLayout& lay) {
  if (const auto* m = std::get_if<DrivenJC>(&spec.v)) {
    const DrivenJC d = *m;
    const Mat sz = make_pauli(lay, 0, 'z').matrix;
    const Mat sp = make_pauli(lay, 0, '+').matrix;
    const Mat sm = make_pauli(lay, 0, '-').matrix;
    const Mat a = make_destroy(lay, 1).matrix;
    const Mat h0 = 0.5 * d.Omega * sz + d.omega * Mat(a.adjoint() * a) -
                   d.g * (sp * a + Mat((sp * a).adjoint()));
    return [=](double t) -> Mat {
      Mat h = h0;
      const Complex e1 = std::exp(I * (d.omega_1 * t + d.phi));
      const Complex e2 = std::exp(I * (d.omega_2 * t + d.phi));
      h += -d.Omega_1 * (e1 * sm + std::conj(e1) * sp);
      h += -d.Omega_2 * (e2 * sm + std::conj(e2) * sp);
      if (d.xi != 0.0) {
        const Complex ec = std::exp(I * d.omega * t);
        h += d.xi * (ec * a + std::conj(ec) * Mat(a.adjoint()));
      }
      return h;
    };
  }
  if (const auto* m = std::get_if<AncillaProbe>(&spec.v)) {
    const AncillaProbe probe = *m;
    AncillaProbe undriven = probe;
    undriven.Omega_d = 0.0;
    const Mat h0 = build_static(ModelSpec(undriven), lay).matrix;
    const int ai = ancilla_index(probe, lay);
    const Mat sx_an = make_pauli(lay, ai, 'x').matrix;
    return [=](double t) -> Mat {
      return h0 + probe.Omega_d * std::cos(probe.omega_d * t) * sx_an;
    };
  }
  // static models are trivially time independent
  const Mat h = build_static(spec, lay).matrix;
  return [h](double) -> Mat { return h; };
}

// -------------------------------------------- driven-JC -> effective QRM map
// In the frame rotating at the dressing drive and in the dressed interaction
// picture, the two-tone driven JC system reduces to a quantum Rabi model with
//   Omega_eff = Omega_2,  omega_eff = omega - omega_1,  g_eff = g/2,
// valid when the second drive sits at omega_2 = omega_1 - 2*Omega_1.  The
// degenerate-mode limit omega_1 = omega (omega_eff = 0) is accepted.
inline QRM effective_qrm_of_driven(const DrivenJC& d, double rel_tol = 1e-9) {
  const double scale = std::max({std::abs(d.Omega), std::abs(d.omega), 1e-300});
  if (std::abs((d.omega_1 - d.omega_2) - 2.0 * d.Omega_1) > rel_tol * scale)
    throw ResonanceMismatch("mapping requires omega_1 - omega_2 = 2*Omega_1");
  QRM q;
  q.Omega = d.Omega_2;
  q.omega = d.omega - d.omega_1;
  q.g = d.g / 2.0;
  q.sign = -1;  // the reduction carries the same sign as the driven coupling
  return q;
}

// ---------------------------------------------------------- cold-atom map
// Optical-lattice parameters -> effective QRM frequencies:
//   Omega = V / (2 hbar), omega = trap frequency, g = 2 k0 sqrt(hbar omega / 2 m).
struct ColdAtomParams {
  double lattice_depth_V = 0.0;  // energy units (V, not V/hbar)
  double trap_frequency = 0.0;   // angular
  double lattice_k0 = 0.0;       // lattice wavevector
  double mass = 1.0;
  double hbar = 1.0;
};

inline QRM cold_atom_map(const ColdAtomParams& p) {
  if (p.trap_frequency <= 0 || p.mass <= 0 || p.hbar <= 0)
    throw InvalidSubsystem("cold_atom_map requires positive trap frequency, mass, hbar");
  QRM q;
  q.Omega = p.lattice_depth_V / (2.0 * p.hbar);
  q.omega = p.trap_frequency;
  q.g = 2.0 * p.lattice_k0 * std::sqrt(p.hbar * p.trap_frequency / (2.0 * p.mass));
  q.sign = +1;
  return q;
}

// ---------------------------------------------------------- digital split
// Two rotating-frame JC-type pieces whose sum equals the target QRM (+g sign):
//   H1 = (omega/2) n + (Omega/4)... ; concretely
//   H1 = (omega/2) a^dag a + (w_q1/2) sz + g (a sigma+ + a^dag sigma-)
//   H2 = (omega/2) a^dag a - (w_q2/2) sz + g (a sigma- + a^dag sigma+)
// with w_q1 = Omega/2, w_q2 = -Omega/2; H2 is realized by conjugating a JC
// piece with a pi rotation about x.
struct DigitalSplit {
  double mode_freq = 0.0;   // omega/2 in both pieces
  double qubit_freq_1 = 0.0;  // w_q1
  double qubit_freq_2 = 0.0;  // w_q2
  double g = 0.0;
};

inline DigitalSplit digital_split(const QRM& q) {
  if (q.sign != +1)
    throw InvalidSubsystem("digital_split defined for the +g sign convention");
  DigitalSplit s;
  s.mode_freq = q.omega / 2.0;
  s.qubit_freq_1 = q.Omega / 2.0;
  s.qubit_freq_2 = -q.Omega / 2.0;
  s.g = q.g;
  return s;
}

inline Mat digital_piece_h1(const DigitalSplit& s, const SystemLayout& lay) {
  const Mat sz = make_pauli(lay, 0, 'z').matrix;
  const Mat sp = make_pauli(lay, 0, '+').matrix;
  const Mat a = make_destroy(lay, 1).matrix;
  return s.mode_freq * Mat(a.adjoint() * a) + 0.5 * s.qubit_freq_1 * sz +
         s.g * (a * sp + Mat((a * sp).adjoint()));
}

inline Mat digital_piece_h2(const DigitalSplit& s, const SystemLayout& lay) {
  // JC piece before conjugation: same form with qubit frequency w_q2
  const Mat sz = make_pauli(lay, 0, 'z').matrix;
  const Mat sp = make_pauli(lay, 0, '+').matrix;
  const Mat a = make_destroy(lay, 1).matrix;
  const Mat jc = s.mode_freq * Mat(a.adjoint() * a) + 0.5 * s.qubit_freq_2 * sz +
                 s.g * (a * sp + Mat((a * sp).adjoint()));
  const Mat sx = make_pauli(lay, 0, 'x').matrix;
  // U = exp(-i pi sx / 2) = -i sx; conjugation flips sz and swaps sigma+-
  const Mat u = -I * sx;
  return u * jc * u.adjoint();
}

// ------------------------------------------------------------ JSON serde
// field names mirror the parameter names above
inline void to_json(nlohmann::json& j, const QRM& m) {
  j = {{"type", "QRM"}, {"Omega", m.Omega}, {"omega", m.omega}, {"g", m.g}, {"sign", m.sign}};
}
inline void from_json(const nlohmann::json& j, QRM& m) {
  m.Omega = j.at("Omega");
  m.omega = j.at("omega");
  m.g = j.at("g");
  m.sign = j.value("sign", +1);
}
inline void to_json(nlohmann::json& j, const JC& m) {
  j = {{"type", "JC"}, {"Omega", m.Omega}, {"omega", m.omega}, {"g", m.g}};
}
inline void from_json(const nlohmann::json& j, JC& m) {
  m.Omega = j.at("Omega"); m.omega = j.at("omega"); m.g = j.at("g");
}
inline void to_json(nlohmann::json& j, const ACStark& m) {
  j = {{"type", "ACStark"}, {"Omega", m.Omega}, {"omega", m.omega}, {"g", m.g}};
}
inline void from_json(const nlohmann::json& j, ACStark& m) {
  m.Omega = j.at("Omega"); m.omega = j.at("omega"); m.g = j.at("g");
}
inline void to_json(nlohmann::json& j, const BlochSiegert& m) {
  j = {{"type", "BlochSiegert"}, {"Omega", m.Omega}, {"omega", m.omega}, {"g", m.g}};
}
inline void from_json(const nlohmann::json& j, BlochSiegert& m) {
  m.Omega = j.at("Omega"); m.omega = j.at("omega"); m.g = j.at("g");
}
inline void to_json(nlohmann::json& j, const AnisotropicRabi& m) {
  j = {{"type", "AnisotropicRabi"}, {"Omega", m.Omega}, {"omega", m.omega},
       {"g_rot", m.g_rot}, {"g_counter", m.g_counter}};
}
inline void from_json(const nlohmann::json& j, AnisotropicRabi& m) {
  m.Omega = j.at("Omega"); m.omega = j.at("omega");
  m.g_rot = j.at("g_rot"); m.g_counter = j.at("g_counter");
}
inline void to_json(nlohmann::json& j, const Dicke& m) {
  j = {{"type", "Dicke"}, {"N", m.N}, {"Omega", m.Omega}, {"omega", m.omega}, {"g", m.g}};
}
inline void from_json(const nlohmann::json& j, Dicke& m) {
  m.N = j.at("N"); m.Omega = j.at("Omega"); m.omega = j.at("omega"); m.g = j.at("g");
}
inline void to_json(nlohmann::json& j, const TavisCummings& m) {
  j = {{"type", "TavisCummings"}, {"N", m.N}, {"Omega", m.Omega}, {"omega", m.omega}, {"g", m.g}};
}
inline void from_json(const nlohmann::json& j, TavisCummings& m) {
  m.N = j.at("N"); m.Omega = j.at("Omega"); m.omega = j.at("omega"); m.g = j.at("g");
}
inline void to_json(nlohmann::json& j, const Hopfield& m) {
  j = {{"type", "Hopfield"}, {"N", m.N}, {"Omega", m.Omega}, {"omega", m.omega}, {"g", m.g}};
}
inline void from_json(const nlohmann::json& j, Hopfield& m) {
  m.N = j.at("N"); m.Omega = j.at("Omega"); m.omega = j.at("omega"); m.g = j.at("g");
}
inline void to_json(nlohmann::json& j, const TwoAtomRabi& m) {
  j = {{"type", "TwoAtomRabi"}, {"Omega", m.Omega}, {"omega", m.omega}, {"g", m.g},
       {"theta", m.theta}};
}
inline void from_json(const nlohmann::json& j, TwoAtomRabi& m) {
  m.Omega = j.at("Omega"); m.omega = j.at("omega"); m.g = j.at("g"); m.theta = j.at("theta");
}
inline void to_json(nlohmann::json& j, const JahnTellerEe& m) {
  j = {{"type", "JahnTellerEe"}, {"Omega_q", m.Omega_q}, {"omega_c", m.omega_c},
       {"lambda", m.lambda}, {"theta", m.theta}, {"phi", m.phi}};
}
inline void from_json(const nlohmann::json& j, JahnTellerEe& m) {
  m.Omega_q = j.at("Omega_q"); m.omega_c = j.at("omega_c"); m.lambda = j.at("lambda");
  m.theta = j.at("theta"); m.phi = j.at("phi");
}
inline void to_json(nlohmann::json& j, const HerzbergTeller& m) {
  j = {{"type", "HerzbergTeller"}, {"Omega_q", m.Omega_q}, {"Omega_1", m.Omega_1},
       {"Omega_2", m.Omega_2}, {"g1", m.g1}, {"g2", m.g2}, {"J", m.J}};
}
inline void from_json(const nlohmann::json& j, HerzbergTeller& m) {
  m.Omega_q = j.at("Omega_q"); m.Omega_1 = j.at("Omega_1"); m.Omega_2 = j.at("Omega_2");
  m.g1 = j.at("g1"); m.g2 = j.at("g2"); m.J = j.at("J");
}
inline void to_json(nlohmann::json& j, const OptomechPair& m) {
  j = {{"type", "OptomechPair"}, {"omega_R", m.omega_R}, {"omega_M", m.omega_M},
       {"g_M", m.g_M}, {"g_R", m.g_R}};
}
inline void from_json(const nlohmann::json& j, OptomechPair& m) {
  m.omega_R = j.at("omega_R"); m.omega_M = j.at("omega_M");
  m.g_M = j.at("g_M"); m.g_R = j.at("g_R");
}
inline void to_json(nlohmann::json& j, const LongitudinalTwoQubit& m) {
  j = {{"type", "LongitudinalTwoQubit"}, {"Omega_1", m.Omega_1}, {"Omega_2", m.Omega_2},
       {"omega", m.omega}, {"g1", m.g1}, {"g2", m.g2}, {"s1", m.s1}, {"s2", m.s2}};
}
inline void from_json(const nlohmann::json& j, LongitudinalTwoQubit& m) {
  m.Omega_1 = j.at("Omega_1"); m.Omega_2 = j.at("Omega_2"); m.omega = j.at("omega");
  m.g1 = j.at("g1"); m.g2 = j.at("g2");
  m.s1 = j.value("s1", +1); m.s2 = j.value("s2", +1);
}
inline void to_json(nlohmann::json& j, const ProtectedDicke& m) {
  j = {{"type", "ProtectedDicke"}, {"N", m.N}, {"Omega", m.Omega}, {"omega", m.omega}, {"g", m.g}};
}
inline void from_json(const nlohmann::json& j, ProtectedDicke& m) {
  m.N = j.at("N"); m.Omega = j.at("Omega"); m.omega = j.at("omega"); m.g = j.at("g");
}
inline void to_json(nlohmann::json& j, const DrivenJC& m) {
  j = {{"type", "DrivenJC"}, {"Omega", m.Omega}, {"omega", m.omega}, {"g", m.g},
       {"Omega_1", m.Omega_1}, {"omega_1", m.omega_1}, {"Omega_2", m.Omega_2},
       {"omega_2", m.omega_2}, {"phi", m.phi}, {"xi", m.xi}};
}
inline void from_json(const nlohmann::json& j, DrivenJC& m) {
  m.Omega = j.at("Omega"); m.omega = j.at("omega"); m.g = j.at("g");
  m.Omega_1 = j.at("Omega_1"); m.omega_1 = j.at("omega_1");
  m.Omega_2 = j.at("Omega_2"); m.omega_2 = j.at("omega_2");
  m.phi = j.value("phi", 0.0); m.xi = j.value("xi", 0.0);
}
inline void to_json(nlohmann::json& j, const DiracEffective& m) {
  j = {{"type", "DiracEffective"}, {"lambda", m.lambda}, {"g", m.g}, {"xi", m.xi}};
}
inline void from_json(const nlohmann::json& j, DiracEffective& m) {
  m.lambda = j.at("lambda"); m.g = j.at("g"); m.xi = j.value("xi", 0.0);
}

void to_json(nlohmann::json& j, const ModelSpec& spec);      // fwd
void from_json(const nlohmann::json& j, ModelSpec& spec);    // fwd

inline void to_json(nlohmann::json& j, const AncillaProbe& m) {
  nlohmann::json host;
  to_json(host, *m.host);
  j = {{"type", "AncillaProbe"}, {"host", host}, {"Omega_an", m.Omega_an},
       {"g_an", m.g_an}, {"Omega_d", m.Omega_d}, {"omega_d", m.omega_d}};
}
inline void from_json(const nlohmann::json& j, AncillaProbe& m) {
  m.host = std::make_shared<ModelSpec>();
  from_json(j.at("host"), *m.host);
  m.Omega_an = j.at("Omega_an"); m.g_an = j.at("g_an");
  m.Omega_d = j.value("Omega_d", 0.0); m.omega_d = j.value("omega_d", 0.0);
}

inline void to_json(nlohmann::json& j, const ModelSpec& spec) {
  std::visit([&](const auto& m) { to_json(j, m); }, spec.v);
}

inline void from_json(const nlohmann::json& j, ModelSpec& spec) {
  const std::string type = j.at("type");
  auto load = [&](auto model) {
    from_json(j, model);
    spec.v = std::move(model);
  };
  if (type == "QRM") load(QRM{});
  else if (type == "JC") load(JC{});
  else if (type == "ACStark") load(ACStark{});
  else if (type == "BlochSiegert") load(BlochSiegert{});
  else if (type == "AnisotropicRabi") load(AnisotropicRabi{});
  else if (type == "Dicke") load(Dicke{});
  else if (type == "TavisCummings") load(TavisCummings{});
  else if (type == "Hopfield") load(Hopfield{});
  else if (type == "TwoAtomRabi") load(TwoAtomRabi{});
  else if (type == "JahnTellerEe") load(JahnTellerEe{});
  else if (type == "HerzbergTeller") load(HerzbergTeller{});
  else if (type == "OptomechPair") load(OptomechPair{});
  else if (type == "LongitudinalTwoQubit") load(LongitudinalTwoQubit{});
  else if (type == "ProtectedDicke") load(ProtectedDicke{});
  else if (type == "DrivenJC") load(DrivenJC{});
  else if (type == "DiracEffective") load(DiracEffective{});
  else if (type == "AncillaProbe") load(AncillaProbe{});
  else throw ParseError("unknown model type: " + type);
}

}  // namespace uscsim

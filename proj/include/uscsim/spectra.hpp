#pragma once
// Eigendecomposition with symmetry labels, coupling-regime classification,
// ground-state observables, perturbative frequency shifts, transition tables,
// and level-repulsion scans.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "models.hpp"

namespace uscsim {

// ------------------------------------------------------------ eigensystem
struct Eigensystem {
  SystemLayout layout;
  RVec energies;                 // ascending
  Mat vectors;                   // columns are eigenvectors
  std::vector<int> parity;       // +1 / -1, or 0 if not a parity eigenstate
  RVec photon;                   // <a^dag a> per state (selected mode)

  int dim() const { return static_cast<int>(energies.size()); }
  QuantumState state(int k) const {
    return QuantumState::from_ket(layout, vectors.col(k));
  }
};

namespace detail {
// Within a degenerate cluster, rotate eigenvectors into simultaneous
// eigenstates of the parity operator, then of the photon number.
inline void resolve_cluster(Mat& vecs, int begin, int count, const Mat& pop, const Mat& nop) {
  auto block = vecs.block(0, begin, vecs.rows(), count);
  Mat psub = block.adjoint() * pop * block;
  Eigen::SelfAdjointEigenSolver<Mat> ep(psub);
  Mat rotated = block * ep.eigenvectors();
  // group by parity eigenvalue, then order photon number within each group
  struct Item { double p; double n; Vec v; };
  std::vector<Item> items;
  for (int c = 0; c < count; ++c) {
    Vec v = rotated.col(c);
    const double p = std::real(v.dot(pop * v));
    const double n = std::real(v.dot(nop * v));
    items.push_back({p, n, std::move(v)});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (std::abs(a.p - b.p) > 1e-6) return a.p > b.p;  // +1 sector first
    return a.n < b.n;                                   // then ascending <n>
  });
  for (int c = 0; c < count; ++c) vecs.col(begin + c) = items[static_cast<size_t>(c)].v;
}
}  // namespace detail

// Full spectrum of a Hermitian operator, with parity labels computed on the
// selected qubit/mode pair. Degenerate levels are resolved into parity
// eigenstates; ties break with the +1 sector first, then ascending <n>.
inline Eigensystem eigensystem(const COperator& h, int qubit_index = 0, int mode_index = 1,
                               double degeneracy_tol = 1e-9) {
  if (!h.hermitian) throw NumericError("eigensystem requires a Hermitian operator");
  Eigen::SelfAdjointEigenSolver<Mat> es(h.matrix);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  Eigensystem out;
  out.layout = h.layout;
  out.energies = es.eigenvalues();
  out.vectors = es.eigenvectors();

  const Mat pop = parity_operator(h.layout, qubit_index, mode_index).matrix;
  const Mat nop = make_number(h.layout, mode_index).matrix;
  const double scale = std::max(1.0, out.energies.cwiseAbs().maxCoeff());
  const double tol = degeneracy_tol * scale;

  int i = 0;
  while (i < out.dim()) {
    int j = i + 1;
    while (j < out.dim() && out.energies(j) - out.energies(j - 1) < tol) ++j;
    if (j - i > 1) detail::resolve_cluster(out.vectors, i, j - i, pop, nop);
    i = j;
  }
  out.parity.resize(static_cast<size_t>(out.dim()));
  out.photon.resize(out.dim());
  for (int k = 0; k < out.dim(); ++k) {
    const Vec v = out.vectors.col(k);
    const double p = std::real(v.dot(pop * v));
    out.parity[static_cast<size_t>(k)] = (p > 1.0 - 1e-6) ? +1 : ((p < -1.0 + 1e-6) ? -1 : 0);
    out.photon(k) = std::real(v.dot(nop * v));
  }
  return out;
}

// Spectrum only, no symmetry labels (for layouts without a qubit/mode pair).
inline Eigensystem eigensystem_basic(const COperator& h) {
  if (!h.hermitian) throw NumericError("eigensystem requires a Hermitian operator");
  Eigen::SelfAdjointEigenSolver<Mat> es(h.matrix);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  Eigensystem out;
  out.layout = h.layout;
  out.energies = es.eigenvalues();
  out.vectors = es.eigenvectors();
  out.parity.assign(static_cast<size_t>(out.energies.size()), 0);
  out.photon = RVec::Zero(out.energies.size());
  return out;
}

// ------------------------------------------------------------ regimes
enum class CouplingRegime { StrongRWA, PerturbativeUSC, NonperturbativeUSC, PerturbativeDSC };

// Boundaries resolve upward: the value at a threshold belongs to the stronger regime.
inline CouplingRegime classify_regime(double g, double omega) {
  if (omega <= 0) throw InvalidSubsystem("classify_regime requires omega > 0");
  const double r = std::abs(g) / omega;
  if (r < 0.1) return CouplingRegime::StrongRWA;
  if (r < 0.3) return CouplingRegime::PerturbativeUSC;
  if (r < 1.0) return CouplingRegime::NonperturbativeUSC;
  return CouplingRegime::PerturbativeDSC;
}

inline std::string regime_name(CouplingRegime r) {
  switch (r) {
    case CouplingRegime::StrongRWA: return "strong-coupling (RWA valid)";
    case CouplingRegime::PerturbativeUSC: return "perturbative ultrastrong";
    case CouplingRegime::NonperturbativeUSC: return "nonperturbative ultrastrong";
    case CouplingRegime::PerturbativeDSC: return "perturbative deep-strong";
  }
  return "unknown";
}

// ------------------------------------------------------- ground-state props
struct GroundStateProps {
  double energy = 0.0;
  double photon_number = 0.0;   // <a^dag a>
  double quad_sq = 0.0;         // <(a + a^dag)^2>
  double anomalous = 0.0;       // <a^2 + a^dag^2>
  double qubit_entropy = 0.0;   // von Neumann entropy of the reduced qubit state
};

inline GroundStateProps ground_state_props(const Eigensystem& es, int qubit_index = 0,
                                           int mode_index = 1) {
  GroundStateProps p;
  p.energy = es.energies(0);
  const QuantumState gs = es.state(0);
  const Mat a = make_destroy(es.layout, mode_index).matrix;
  const Mat x = a + Mat(a.adjoint());
  const Vec v = gs.ket;
  p.photon_number = std::real(v.dot(Mat(a.adjoint() * a) * v));
  p.quad_sq = std::real(v.dot(Mat(x * x) * v));
  p.anomalous = std::real(v.dot(Mat(a * a + Mat(a * a).adjoint()) * v));
  p.qubit_entropy = von_neumann_entropy(reduce_to_subsystem(gs, qubit_index));
  return p;
}

// --------------------------------------------------------- frequency shifts
// Counter-rotating (Bloch-Siegert-type) shift of the dispersive reduction.
inline double bloch_siegert_shift(double Omega, double omega, double g) {
  if (std::abs(Omega + omega) < 1e-12) throw SingularDetuning("Omega + omega ~ 0");
  return g * g / (Omega + omega);
}

// Numeric mode-frequency pull: difference between the lowest photon-carrying
// transition of the full model and of its rotating-wave reduction.
struct ModePull {
  double full_transition = 0.0;  // E_k - E_0 of the photon-like level, full model
  double rwa_transition = 0.0;   // same for the rotating-wave reduction
  double pull = 0.0;             // full - rwa
};

inline ModePull dispersive_mode_pull(double Omega, double omega, double g, int n_max) {
  const SystemLayout lay = SystemLayout::qubit_mode(n_max);
  const Eigensystem full = eigensystem(build_static(ModelSpec(QRM{Omega, omega, g, +1}), lay));
  const Eigensystem rwa = eigensystem(build_static(ModelSpec(JC{Omega, omega, g}), lay));
  auto photon_like = [](const Eigensystem& e) -> double {
    const double n0 = e.photon(0);
    for (int k = 1; k < e.dim(); ++k)
      if (e.photon(k) - n0 > 0.5) return e.energies(k) - e.energies(0);
    throw NumericError("no photon-like level found");
  };
  ModePull out;
  out.full_transition = photon_like(full);
  out.rwa_transition = photon_like(rwa);
  out.pull = out.full_transition - out.rwa_transition;
  return out;
}

// Probe-qubit frequency shift, second order in the probe coupling:
//   d = g_an^2 [1/(W-w) + 1/(W+w)] <X^2>
//     + g_an^2 [1/(W-w)^2 - 1/(W+w)^2] <V>
// with X = a + a^dag on the probed mode, W the probe splitting, w the mode
// frequency, expectation values in the host ground state, and V the host
// light-matter interaction written with the mode displaced.
inline double lamb_shift_perturbative(const AncillaProbe& probe, int n_max) {
  const ModelSpec& host = *probe.host;
  double omega = 0.0;
  Mat vop;  // host interaction operator
  const SystemLayout hl = default_layout(host, n_max);
  const int mode = [&] {
    for (int i = 0; i < hl.size(); ++i)
      if (hl.at(i).kind == Subsystem::Kind::BosonMode) return i;
    throw InvalidSubsystem("host has no boson mode");
  }();
  const Mat a = make_destroy(hl, mode).matrix;
  const Mat x = a + Mat(a.adjoint());
  if (const auto* m = std::get_if<Dicke>(&host.v)) {
    omega = m->omega;
    Mat jx = Mat::Zero(hl.total_dim(), hl.total_dim());
    for (int q = 0; q < m->N; ++q) jx += 0.5 * make_pauli(hl, q, 'x').matrix;
    vop = (m->g / std::sqrt(static_cast<double>(m->N))) * x * jx * 2.0;  // g/sqrt(N) X (J+ + J-)
  } else if (const auto* m = std::get_if<TavisCummings>(&host.v)) {
    omega = m->omega;
    Mat jp = Mat::Zero(hl.total_dim(), hl.total_dim());
    for (int q = 0; q < m->N; ++q) jp += make_pauli(hl, q, '+').matrix;
    vop = (m->g / std::sqrt(static_cast<double>(m->N))) *
          (Mat(a.adjoint()) * Mat(jp.adjoint()) + a * jp);
  } else if (const auto* m = std::get_if<Hopfield>(&host.v)) {
    omega = m->omega;
    Mat jx = Mat::Zero(hl.total_dim(), hl.total_dim());
    for (int q = 0; q < m->N; ++q) jx += 0.5 * make_pauli(hl, q, 'x').matrix;
    vop = (m->g / std::sqrt(static_cast<double>(m->N))) * x * jx * 2.0 +
          (2.0 * m->g * m->g / m->Omega) * x * x;
  } else {
    throw InvalidSubsystem("perturbative probe shift supports Dicke/TavisCummings/Hopfield hosts");
  }
  const double W = probe.Omega_an;
  if (std::abs(W - omega) < 1e-9 * std::max(1.0, std::abs(omega)) ||
      std::abs(W + omega) < 1e-9 * std::max(1.0, std::abs(omega)))
    throw SingularDetuning("probe splitting coincides with the mode frequency");
  const Eigensystem hes = eigensystem_basic(build_static(host, hl));
  const Vec g0 = hes.vectors.col(0);
  const double x2 = std::real(g0.dot(Mat(x * x) * g0));
  const double vexp = std::real(g0.dot(vop * g0));
  const double g2 = probe.g_an * probe.g_an;
  return g2 * (1.0 / (W - omega) + 1.0 / (W + omega)) * x2 +
         g2 * (1.0 / ((W - omega) * (W - omega)) - 1.0 / ((W + omega) * (W + omega))) * vexp;
}

// Exact probe shift: probe-like transition energy of the coupled system minus
// the bare probe splitting. The probe-like excited level is the one most
// strongly connected to the ground state by the probe sigma_x.
inline double lamb_shift_exact(const AncillaProbe& probe, int n_max) {
  const ModelSpec spec{probe};
  const SystemLayout lay = default_layout(spec, n_max);
  const Eigensystem es = eigensystem_basic(build_static(spec, lay));
  const int ai = ancilla_index(probe, lay);
  const Mat sx = make_pauli(lay, ai, 'x').matrix;
  const Vec g0 = es.vectors.col(0);
  int best = -1;
  double bestw = -1.0;
  for (int k = 1; k < es.dim(); ++k) {
    const double w = std::abs(Complex(g0.dot(sx * es.vectors.col(k))));
    if (w > bestw) { bestw = w; best = k; }
  }
  if (best < 0) throw NumericError("no probe-like transition found");
  return (es.energies(best) - es.energies(0)) - probe.Omega_an;
}

// ------------------------------------------------------- doublet splitting
// Ground-doublet gap of the protected collective model; decays like
// Omega * exp(-2 N g^2 / omega^2) deep in the strong-coupling limit.
struct DoubletSplitting {
  double exact = 0.0;       // E1 - E0
  double asymptotic = 0.0;  // Omega * exp(-2 N g^2 / omega^2)
};

inline DoubletSplitting doublet_splitting(const ProtectedDicke& m, int n_max) {
  const ModelSpec spec{m};
  const SystemLayout lay = default_layout(spec, n_max);
  const Eigensystem es = eigensystem_basic(build_static(spec, lay));
  DoubletSplitting out;
  out.exact = es.energies(1) - es.energies(0);
  out.asymptotic = m.Omega * std::exp(-2.0 * m.N * m.g * m.g / (m.omega * m.omega));
  return out;
}

// ------------------------------------------------------- transition table
struct Transition {
  int from = 0, to = 0;       // level indices, to > from
  double energy = 0.0;        // E_to - E_from
  double element_sq = 0.0;    // |<to|O|from>|^2
};

inline std::vector<Transition> transition_table(const Eigensystem& es, const COperator& op,
                                                double floor = 1e-8) {
  if (es.layout != op.layout) throw LayoutMismatch("transition_table layout mismatch");
  std::vector<Transition> out;
  for (int j = 0; j < es.dim(); ++j)
    for (int k = j + 1; k < es.dim(); ++k) {
      const double el = std::norm(Complex(es.vectors.col(k).dot(op.matrix * es.vectors.col(j))));
      if (el > floor)
        out.push_back({j, k, es.energies(k) - es.energies(j), el});
    }
  return out;
}

// --------------------------------------------------- two-qubit level repulsion
// Locates the avoided crossing between the doubly excited qubit level and the
// one-photon level as the mode frequency is swept, and returns the minimum gap.
struct Anticrossing {
  double omega_star = 0.0;  // mode frequency at minimum gap
  double gap = 0.0;         // full gap at that frequency
};

inline Anticrossing two_atom_anticrossing(const TwoAtomRabi& base, int n_max, double omega_lo,
                                          double omega_hi, int coarse_points = 41,
                                          int refine_rounds = 3) {
  const SystemLayout lay = SystemLayout::qubits_mode(2, n_max);
  const Vec ee0 = basis_ket(lay, {1, 1, 0});
  const Vec gg1 = basis_ket(lay, {0, 0, 1});
  auto gap_at = [&](double omega) -> double {
    TwoAtomRabi m = base;
    m.omega = omega;
    const Eigensystem es = eigensystem_basic(build_static(ModelSpec(m), lay));
    // pick the two levels with the most weight on {|ee,0>, |gg,1>}
    int k1 = -1, k2 = -1;
    double w1 = -1, w2 = -1;
    for (int k = 0; k < es.dim(); ++k) {
      const Vec v = es.vectors.col(k);
      const double w = std::norm(Complex(ee0.dot(v))) + std::norm(Complex(gg1.dot(v)));
      if (w > w1) { w2 = w1; k2 = k1; w1 = w; k1 = k; }
      else if (w > w2) { w2 = w; k2 = k; }
    }
    return std::abs(es.energies(k1) - es.energies(k2));
  };
  double lo = omega_lo, hi = omega_hi;
  double best_w = lo, best_gap = gap_at(lo);
  for (int round = 0; round <= refine_rounds; ++round) {
    const int pts = coarse_points;
    for (int i = 0; i < pts; ++i) {
      const double w = lo + (hi - lo) * i / (pts - 1);
      const double gp = gap_at(w);
      if (gp < best_gap) { best_gap = gp; best_w = w; }
    }
    const double span = (hi - lo) / (pts - 1);
    lo = best_w - span;
    hi = best_w + span;
  }
  return {best_w, best_gap};
}

// Third-order effective two-qubit flip rate for the mixed-angle model at the
// two-excitation resonance (omega ~ 2 Omega).
inline double two_atom_effective_rate(const TwoAtomRabi& m) {
  return (16.0 / (9.0 * std::sqrt(2.0))) * std::pow(m.g / m.Omega, 3) * m.Omega;
}

}  // namespace uscsim

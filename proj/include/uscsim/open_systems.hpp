#pragma once
// Open-system machinery: standard Lindblad dissipators, eigenstate-basis
// (dressed) jump rates and Lindbladian, steady states via the vectorized
// generator, the output emission operator with its photon flux, and
// emission under a modulated coupling.

#include "dynamics.hpp"

namespace uscsim {

// ------------------------------------------------------------ bath spec
enum class SpectralShape { Flat, Ohmic };

// shape factor s(w): Flat -> 1 for w > 0; Ohmic -> w / w_ref for w > 0.
// Zero-temperature baths return 0 at w <= 0.
inline double spectral_factor(SpectralShape s, double w, double w_ref) {
  if (w <= 0.0) return 0.0;
  return s == SpectralShape::Flat ? 1.0 : w / w_ref;
}

struct LindbladSpec {
  double kappa0 = 0.0;    // photon loss base rate
  double gamma0 = 0.0;    // qubit relaxation base rate
  double gphi0 = 0.0;     // pure dephasing base rate
  SpectralShape kappa_shape = SpectralShape::Ohmic;
  SpectralShape gamma_shape = SpectralShape::Flat;
  SpectralShape gphi_shape = SpectralShape::Ohmic;  // gphi(0) = 0 (sweet spot)
  double omega_ref = 1.0;  // reference frequency for ohmic shapes

  double kappa(double w) const { return kappa0 * spectral_factor(kappa_shape, w, omega_ref); }
  double gamma(double w) const { return gamma0 * spectral_factor(gamma_shape, w, omega_ref); }
  double gphi(double w) const {
    if (gphi_shape == SpectralShape::Ohmic && w == 0.0) return 0.0;
    if (w < 0.0) return 0.0;
    return gphi0 * (gphi_shape == SpectralShape::Flat ? 1.0
                                                      : (w == 0.0 ? 0.0 : w / omega_ref));
  }
};

// ------------------------------------------------------ standard Lindblad
// D[O] rho = (2 O rho O^dag - rho O^dag O - O^dag O rho)/2
inline Mat dissipator(const Mat& o, const Mat& rho) {
  const Mat od = o.adjoint();
  const Mat odo = od * o;
  return o * rho * od - 0.5 * (rho * odo + odo * rho);
}

// -i[H,rho] + kappa D[a] + gamma D[sigma-] + (gphi/2) D[sigma_z], base rates.
inline Mat standard_lindblad_rhs(const Mat& rho, const COperator& h, const LindbladSpec& spec,
                                 int qubit_index = 0, int mode_index = 1) {
  const SystemLayout& lay = h.layout;
  const Mat a = make_destroy(lay, mode_index).matrix;
  const Mat sm = make_pauli(lay, qubit_index, '-').matrix;
  const Mat sz = make_pauli(lay, qubit_index, 'z').matrix;
  Mat out = -I * (h.matrix * rho - rho * h.matrix);
  if (spec.kappa0 > 0.0) out += spec.kappa0 * dissipator(a, rho);
  if (spec.gamma0 > 0.0) out += spec.gamma0 * dissipator(sm, rho);
  if (spec.gphi0 > 0.0) out += 0.5 * spec.gphi0 * dissipator(sz, rho);
  return out;
}

// ------------------------------------------------------------ dressed rates
// In the eigenbasis {|j>} with gaps D_jk = E_k - E_j (k above j):
//   Phi_j       = sqrt(gphi(0)/2) <j|sz|j>               (dephasing amplitudes)
//   Gphi_{jk}   = (gphi(D_jk)/2) |<j|sz|k>|^2
//   Gkappa_{jk} = kappa(D_jk) |<j|X|k>|^2,  X = a + a^dag
//   Ggamma_{jk} = gamma(D_jk) |<j|sx|k>|^2
// All jump rates are downward-only at T = 0.
struct DressedRates {
  int dim = 0;
  RVec phi;                 // Phi_j
  Eigen::MatrixXd g_phi;    // Gphi_{jk}, k > j
  Eigen::MatrixXd g_kappa;  // Gkappa_{jk}, k > j
  Eigen::MatrixXd g_gamma;  // Ggamma_{jk}, k > j
  Mat sz_eig, x_eig;        // operators in the eigenbasis (for diagnostics)
};

inline DressedRates dressed_rates(const Eigensystem& es, const LindbladSpec& spec,
                                  int qubit_index = 0, int mode_index = 1) {
  const int d = es.dim();
  const Mat a = make_destroy(es.layout, mode_index).matrix;
  const Mat x = a + Mat(a.adjoint());
  const Mat sz = make_pauli(es.layout, qubit_index, 'z').matrix;
  const Mat sx = make_pauli(es.layout, qubit_index, 'x').matrix;
  const Mat xe = es.vectors.adjoint() * x * es.vectors;
  const Mat sze = es.vectors.adjoint() * sz * es.vectors;
  const Mat sxe = es.vectors.adjoint() * sx * es.vectors;
  DressedRates r;
  r.dim = d;
  r.phi = RVec(d);
  r.g_phi = Eigen::MatrixXd::Zero(d, d);
  r.g_kappa = Eigen::MatrixXd::Zero(d, d);
  r.g_gamma = Eigen::MatrixXd::Zero(d, d);
  const double phi_scale = std::sqrt(spec.gphi(0.0) / 2.0);
  for (int j = 0; j < d; ++j) r.phi(j) = phi_scale * std::real(sze(j, j));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      const double gap = es.energies(k) - es.energies(j);
      r.g_phi(j, k) = 0.5 * spec.gphi(gap) * std::norm(sze(j, k));
      r.g_kappa(j, k) = spec.kappa(gap) * std::norm(xe(j, k));
      r.g_gamma(j, k) = spec.gamma(gap) * std::norm(sxe(j, k));
    }
  r.sz_eig = sze;
  r.x_eig = xe;
  return r;
}

// ----------------------------------------------------- dressed Lindbladian
// rho is expressed in the eigenbasis of es. Jump operators are |j><k| (k > j)
// with the three rate families, plus the diagonal dephasing amplitudes Phi_j.
inline Mat dressed_lindblad_rhs(const Mat& rho_eig, const Eigensystem& es,
                                const DressedRates& rates) {
  const int d = rates.dim;
  if (rho_eig.rows() != d) throw LayoutMismatch("density matrix basis mismatch");
  Mat out = Mat::Zero(d, d);
  // coherent part: H is diagonal in this basis
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      out(j, k) += -I * (es.energies(j) - es.energies(k)) * rho_eig(j, k);
  // diagonal dephasing with collective amplitude operator sum_j Phi_j |j><j|
  Mat phi_op = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) phi_op(j, j) = rates.phi(j);
  out += dissipator(phi_op, rho_eig);
  // downward jumps
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      const double rate = rates.g_phi(j, k) + rates.g_kappa(j, k) + rates.g_gamma(j, k);
      if (rate <= 0.0) continue;
      // D[|j><k|] applied analytically
      out(j, j) += rate * rho_eig(k, k);
      for (int m = 0; m < d; ++m) {
        out(k, m) -= 0.5 * rate * rho_eig(k, m);
        out(m, k) -= 0.5 * rate * rho_eig(m, k);
      }
    }
  return out;
}

// ------------------------------------------------------------ steady state
// Null space of the vectorized generator (row-major vectorization):
//   vec(H rho)      = kron(H, I) v
//   vec(rho H)      = kron(I, H^T) v
//   vec(O rho O^d)  = kron(O, conj(O)) v
inline Mat liouvillian_matrix(const COperator& h, const LindbladSpec& spec, int qubit_index = 0,
                              int mode_index = 1) {
  const int d = h.layout.total_dim();
  const Mat id = Mat::Identity(d, d);
  auto comm = [&](const Mat& m) -> Mat { return kron(m, id) - kron(id, Mat(m.transpose())); };
  auto diss = [&](const Mat& o) -> Mat {
    const Mat od = o.adjoint();
    const Mat odo = od * o;
    return kron(o, Mat(o.conjugate())) -
           0.5 * (kron(odo, id) + kron(id, Mat(odo.transpose())));
  };
  Mat l = -I * comm(h.matrix);
  if (spec.kappa0 > 0.0) l += spec.kappa0 * diss(make_destroy(h.layout, mode_index).matrix);
  if (spec.gamma0 > 0.0) l += spec.gamma0 * diss(make_pauli(h.layout, qubit_index, '-').matrix);
  if (spec.gphi0 > 0.0) l += 0.5 * spec.gphi0 * diss(make_pauli(h.layout, qubit_index, 'z').matrix);
  return l;
}

inline Mat steady_state_from_generator(const Mat& l, double uniqueness_tol = 1e-10) {
  const Eigen::Index d2 = l.rows();
  const Eigen::Index d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(d2))));
  Eigen::BDCSVD<Mat> svd(l, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(d2 - 2) <= uniqueness_tol * sv(0))
    throw NonUniqueSteadyState("second-smallest singular value below threshold");
  Vec v = svd.matrixV().col(d2 - 1);
  Mat rho(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) rho(i, j) = v(i * d + j);
  rho = 0.5 * (rho + Mat(rho.adjoint()));
  rho /= rho.trace().real();
  return rho;
}

inline Mat steady_state(const COperator& h, const LindbladSpec& spec, int qubit_index = 0,
                        int mode_index = 1) {
  return steady_state_from_generator(liouvillian_matrix(h, spec, qubit_index, mode_index));
}

// ----------------------------------------------- density-matrix propagation
// Fixed-step classical 4th-order stepping on an arbitrary right-hand side.
template <class Rhs>
inline Mat evolve_density(Mat rho, const Rhs& rhs, double t0, double t1, double dt_max) {
  const double span = t1 - t0;
  const int steps = std::max(1, static_cast<int>(std::ceil(span / dt_max)));
  const double dt = span / steps;
  double t = t0;
  for (int s = 0; s < steps; ++s) {
    const Mat k1 = rhs(t, rho);
    const Mat k2 = rhs(t + 0.5 * dt, Mat(rho + 0.5 * dt * k1));
    const Mat k3 = rhs(t + 0.5 * dt, Mat(rho + 0.5 * dt * k2));
    const Mat k4 = rhs(t + dt, Mat(rho + dt * k3));
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += dt;
  }
  return rho;
}

// recommended step for dressed evolutions: resolve every gap and rate
inline double dressed_step_bound(const Eigensystem& es, const DressedRates& r) {
  double wmax = 1e-12;
  wmax = std::max(wmax, es.energies(es.dim() - 1) - es.energies(0));
  double rmax = 0.0;
  for (int j = 0; j < r.dim; ++j)
    for (int k = j + 1; k < r.dim; ++k)
      rmax = std::max({rmax, r.g_phi(j, k), r.g_kappa(j, k), r.g_gamma(j, k)});
  return 1.0 / (20.0 * std::max(wmax, rmax));
}

// ------------------------------------------------------ emission operator
struct OutputChannelParams {
  double p0 = 1.0;        // quadrature scale in P = -i p0 (a - a^dag)
  double prefactor = 1.0; // common flux prefactor (symbolic; only ratios matter)
};

// Positive-frequency emission derivative in the eigenbasis:
//   Pdot+ = -i sum_{j, k>j} D_kj P_jk |j><k|
// Structurally annihilates the ground state.
inline Mat output_emission_operator(const Eigensystem& es, const OutputChannelParams& params) {
  const int d = es.dim();
  const Mat a = make_destroy(es.layout, 1).matrix;
  const Mat p = Mat(-I * params.p0 * (a - Mat(a.adjoint())));
  const Mat pe = es.vectors.adjoint() * p * es.vectors;
  Mat out = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k)
      out(j, k) = -I * (es.energies(k) - es.energies(j)) * pe(j, k);
  return out;  // eigenbasis representation
}

// flux(rho) = prefactor * <(Pdot+)^dag Pdot+>, rho in the eigenbasis
inline double emission_flux(const Mat& rho_eig, const Mat& pdot_plus,
                            const OutputChannelParams& params) {
  const Complex v = (pdot_plus.adjoint() * pdot_plus * rho_eig).trace();
  return params.prefactor * v.real();
}

// ----------------------------------------- modulated-coupling emission series
// g(t) = g0 + dg sin(w_mod t); the jump rates and the emission operator are
// frozen at the g0 system (documented approximation), while the Hamiltonian
// carries the modulation.
struct ModulatedEmissionResult {
  RVec times;
  RVec flux;
  double mean_flux_second_half = 0.0;
};

inline ModulatedEmissionResult modulated_coupling_evolution(
    const QRM& base, double dg, double omega_mod, const TimeGrid& grid,
    const LindbladSpec& lind, int n_max, const OutputChannelParams& out_params = {}) {
  const SystemLayout lay = SystemLayout::qubit_mode(n_max);
  const COperator h0 = build_static(ModelSpec(base), lay);
  const Eigensystem es = eigensystem(h0);
  const DressedRates rates = dressed_rates(es, lind);
  const Mat pdot = output_emission_operator(es, out_params);
  // modulation operator in the eigenbasis
  const Mat sx = make_pauli(lay, 0, 'x').matrix;
  const Mat a = make_destroy(lay, 1).matrix;
  const Mat coup = es.vectors.adjoint() * (sx * (a + Mat(a.adjoint()))) * es.vectors;
  const double sgn = static_cast<double>(base.sign);
  Eigensystem es_diag = es;  // gaps enter the coherent part; vectors unused below
  auto rhs = [&](double t, const Mat& rho) -> Mat {
    Mat d = dressed_lindblad_rhs(rho, es_diag, rates);
    const double amp = sgn * dg * std::sin(omega_mod * t);
    d += -I * amp * (coup * rho - rho * coup);
    return d;
  };
  const double dt_bound = std::min(dressed_step_bound(es, rates),
                                   (2.0 * PI / std::max(omega_mod, 1e-12)) / 50.0);
  ModulatedEmissionResult res;
  res.times = grid.times();
  res.flux = RVec(grid.n_steps + 1);
  // start in the dressed ground state (stationary without modulation)
  Mat rho = Mat::Zero(es.dim(), es.dim());
  rho(0, 0) = 1.0;
  res.flux(0) = emission_flux(rho, pdot, out_params);
  double acc = 0.0;
  int acc_n = 0;
  for (int k = 0; k < grid.n_steps; ++k) {
    rho = evolve_density(rho, rhs, res.times(k), res.times(k + 1), dt_bound);
    const double f = emission_flux(rho, pdot, out_params);
    res.flux(k + 1) = f;
    if (res.times(k + 1) >= 0.5 * (grid.t0 + grid.t1)) {
      acc += f;
      ++acc_n;
    }
  }
  res.mean_flux_second_half = acc_n > 0 ? acc / acc_n : 0.0;
  return res;
}

// lowest gap from the ground state that the modulated coupling can drive:
// same parity as the ground state and a nonzero sx(a+a^dag) matrix element
inline double lowest_driveable_gap(const Eigensystem& es, double element_floor = 1e-8) {
  const Mat sx = make_pauli(es.layout, 0, 'x').matrix;
  const Mat a = make_destroy(es.layout, 1).matrix;
  const Mat coup = sx * (a + Mat(a.adjoint()));
  const Vec g0 = es.vectors.col(0);
  for (int k = 1; k < es.dim(); ++k) {
    if (es.parity[static_cast<size_t>(k)] != es.parity[0]) continue;
    if (std::abs(Complex(es.vectors.col(k).dot(coup * g0))) > element_floor)
      return es.energies(k) - es.energies(0);
  }
  throw NumericError("no driveable transition found");
}

}  // namespace uscsim

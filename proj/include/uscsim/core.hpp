#pragma once
// Truncated Hilbert spaces, elementary operators, tensor embeddings,
// parity operator, expectation values and state containers.

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace uscsim {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr Complex I{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;

// ---------------------------------------------------------------- errors
struct UscError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidSubsystem : UscError { using UscError::UscError; };
struct LayoutMismatch : UscError { using UscError::UscError; };
struct InvalidTruncation : UscError { using UscError::UscError; };
struct ResonanceMismatch : UscError { using UscError::UscError; };
struct SingularDetuning : UscError { using UscError::UscError; };
struct LoopNotClosed : UscError { using UscError::UscError; };
struct StepTooCoarse : UscError { using UscError::UscError; };
struct TruncationLeak : UscError { using UscError::UscError; };
struct CommensurabilityError : UscError { using UscError::UscError; };
struct NonUniqueSteadyState : UscError { using UscError::UscError; };
struct NumericError : UscError { using UscError::UscError; };
struct ParseError : UscError { using UscError::UscError; };

// default tolerances
namespace tol {
inline constexpr double hermiticity = 1e-10;
inline constexpr double unitarity = 1e-8;
inline constexpr double normalization = 1e-10;
}  // namespace tol

// ---------------------------------------------------------------- layout
struct Subsystem {
  enum class Kind { Qubit, BosonMode };
  Kind kind = Kind::Qubit;
  int n_max = 0;  // only for BosonMode; dimension is n_max + 1

  int dim() const { return kind == Kind::Qubit ? 2 : n_max + 1; }
  static Subsystem qubit() { return {Kind::Qubit, 0}; }
  static Subsystem mode(int n_max) {
    if (n_max < 1) throw InvalidTruncation("BosonMode requires N_max >= 1");
    return {Kind::BosonMode, n_max};
  }
  bool operator==(const Subsystem& o) const {
    return kind == o.kind && (kind == Kind::Qubit || n_max == o.n_max);
  }
};

class SystemLayout {
 public:
  SystemLayout() = default;
  explicit SystemLayout(std::vector<Subsystem> subs) : subs_(std::move(subs)) {
    total_dim_ = 1;
    for (const auto& s : subs_) total_dim_ *= s.dim();
    if (subs_.empty() || total_dim_ < 1)
      throw InvalidTruncation("layout must contain at least one subsystem");
  }
  int size() const { return static_cast<int>(subs_.size()); }
  int total_dim() const { return total_dim_; }
  const Subsystem& at(int i) const {
    if (i < 0 || i >= size()) throw InvalidSubsystem("subsystem index out of range");
    return subs_[static_cast<size_t>(i)];
  }
  const std::vector<Subsystem>& subsystems() const { return subs_; }
  bool operator==(const SystemLayout& o) const { return subs_ == o.subs_; }
  bool operator!=(const SystemLayout& o) const { return !(*this == o); }

  // convenience constructors
  static SystemLayout qubit_mode(int n_max) {
    return SystemLayout({Subsystem::qubit(), Subsystem::mode(n_max)});
  }
  static SystemLayout qubits_mode(int n_qubits, int n_max) {
    std::vector<Subsystem> s(static_cast<size_t>(n_qubits), Subsystem::qubit());
    s.push_back(Subsystem::mode(n_max));
    return SystemLayout(std::move(s));
  }

 private:
  std::vector<Subsystem> subs_;
  int total_dim_ = 0;
};

// ---------------------------------------------------------------- operator
struct COperator {
  SystemLayout layout;
  Mat matrix;
  bool hermitian = false;

  COperator() = default;
  COperator(SystemLayout lay, Mat m, bool herm = false)
      : layout(std::move(lay)), matrix(std::move(m)), hermitian(herm) {
    if (matrix.rows() != layout.total_dim() || matrix.cols() != layout.total_dim())
      throw LayoutMismatch("operator dimension does not match layout");
    if (hermitian) {
      const double dev = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
      if (dev > tol::hermiticity)
        throw NumericError("hermitian flag set but max |M - M^dag| = " + std::to_string(dev));
    }
  }
};

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Embed a local operator acting on subsystem `index` into the full space.
inline Mat embed(const SystemLayout& layout, int index, const Mat& local) {
  if (index < 0 || index >= layout.size())
    throw InvalidSubsystem("subsystem index out of range");
  if (local.rows() != layout.at(index).dim())
    throw LayoutMismatch("local operator dimension mismatch");
  Mat out = Mat::Identity(1, 1);
  for (int i = 0; i < layout.size(); ++i) {
    const int d = layout.at(i).dim();
    out = kron(out, i == index ? local : Mat(Mat::Identity(d, d)));
  }
  return out;
}

// -------------------------------------------------------- local operators
// Qubit basis convention: index 0 = |g>, index 1 = |e>;
// sigma_z = |e><e| - |g><g|, sigma_+ = |e><g|.
inline Mat pauli_local(char axis) {
  Mat m = Mat::Zero(2, 2);
  switch (axis) {
    case 'x': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 'y': m(0, 1) = I; m(1, 0) = -I; break;
    case 'z': m(0, 0) = -1.0; m(1, 1) = 1.0; break;
    case '+': m(1, 0) = 1.0; break;  // |e><g|
    case '-': m(0, 1) = 1.0; break;  // |g><e|
    default: throw InvalidSubsystem(std::string("unknown Pauli axis: ") + axis);
  }
  return m;
}

inline Mat destroy_local(int n_max) {
  Mat m = Mat::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return m;
}

inline COperator make_destroy(const SystemLayout& layout, int mode_index) {
  if (layout.at(mode_index).kind != Subsystem::Kind::BosonMode)
    throw InvalidSubsystem("make_destroy requires a BosonMode subsystem");
  return {layout, embed(layout, mode_index, destroy_local(layout.at(mode_index).n_max)), false};
}

inline COperator make_create(const SystemLayout& layout, int mode_index) {
  COperator a = make_destroy(layout, mode_index);
  return {layout, a.matrix.adjoint(), false};
}

inline COperator make_number(const SystemLayout& layout, int mode_index) {
  COperator a = make_destroy(layout, mode_index);
  return {layout, Mat(a.matrix.adjoint() * a.matrix), true};
}

inline COperator make_pauli(const SystemLayout& layout, int qubit_index, char axis) {
  if (layout.at(qubit_index).kind != Subsystem::Kind::Qubit)
    throw InvalidSubsystem("make_pauli requires a Qubit subsystem");
  const bool herm = (axis == 'x' || axis == 'y' || axis == 'z');
  return {layout, embed(layout, qubit_index, pauli_local(axis)), herm};
}

// Parity P = sigma_z * exp(i*pi*n) on the selected qubit and mode.
// P|g,0> = -|g,0>, P|e,0> = +|e,0>, P^2 = I.
inline COperator parity_operator(const SystemLayout& layout, int qubit_index, int mode_index) {
  if (layout.at(qubit_index).kind != Subsystem::Kind::Qubit)
    throw InvalidSubsystem("parity_operator qubit index must address a qubit");
  if (layout.at(mode_index).kind != Subsystem::Kind::BosonMode)
    throw InvalidSubsystem("parity_operator mode index must address a mode");
  const int nm = layout.at(mode_index).n_max;
  Mat fock_parity = Mat::Zero(nm + 1, nm + 1);
  for (int n = 0; n <= nm; ++n) fock_parity(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  Mat p = embed(layout, qubit_index, pauli_local('z')) * embed(layout, mode_index, fock_parity);
  return {layout, std::move(p), true};
}

// ---------------------------------------------------------------- state
struct QuantumState {
  SystemLayout layout;
  bool is_ket = true;
  Vec ket;  // valid when is_ket
  Mat rho;  // valid when !is_ket

  static QuantumState from_ket(SystemLayout lay, Vec psi) {
    if (psi.size() != lay.total_dim()) throw LayoutMismatch("ket dimension mismatch");
    const double n = psi.norm();
    if (std::abs(n - 1.0) > tol::normalization)
      throw NumericError("ket is not normalized: |norm-1| = " + std::to_string(std::abs(n - 1.0)));
    QuantumState s;
    s.layout = std::move(lay);
    s.is_ket = true;
    s.ket = std::move(psi);
    return s;
  }
  static QuantumState from_density(SystemLayout lay, Mat r) {
    if (r.rows() != lay.total_dim() || r.cols() != lay.total_dim())
      throw LayoutMismatch("density matrix dimension mismatch");
    if (std::abs(r.trace().real() - 1.0) > tol::normalization || std::abs(r.trace().imag()) > tol::normalization)
      throw NumericError("density matrix trace differs from 1");
    QuantumState s;
    s.layout = std::move(lay);
    s.is_ket = false;
    s.rho = std::move(r);
    return s;
  }
  Mat density() const {
    if (is_ket) return ket * ket.adjoint();
    return rho;
  }
};

// basis ket |i0, i1, ...> with per-subsystem level indices
inline Vec basis_ket(const SystemLayout& layout, const std::vector<int>& levels) {
  if (static_cast<int>(levels.size()) != layout.size())
    throw LayoutMismatch("level list length does not match layout");
  int idx = 0;
  for (int i = 0; i < layout.size(); ++i) {
    const int d = layout.at(i).dim();
    if (levels[static_cast<size_t>(i)] < 0 || levels[static_cast<size_t>(i)] >= d)
      throw InvalidSubsystem("basis level out of range");
    idx = idx * d + levels[static_cast<size_t>(i)];
  }
  Vec v = Vec::Zero(layout.total_dim());
  v(idx) = 1.0;
  return v;
}

inline Complex expectation(const QuantumState& state, const COperator& op) {
  if (state.layout != op.layout) throw LayoutMismatch("state/operator layout mismatch");
  if (state.is_ket) return state.ket.dot(op.matrix * state.ket);
  return (op.matrix * state.rho).trace();
}

inline double real_expectation(const QuantumState& state, const COperator& op) {
  const Complex v = expectation(state, op);
  return v.real();
}

// Matrix exponential of a (small, dense) matrix via scaling-and-squaring on
// the Hermitian/anti-Hermitian structure is not assumed; uses Eigen's
// unsupported module replaced by an eigendecomposition fallback for normal
// matrices and Pade-free squaring for general ones.
inline Mat expm_hermitian_times(const Mat& h, Complex factor) {
  // returns exp(factor * h) for Hermitian h, via spectral decomposition
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed in expm");
  Vec phases(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::exp(factor * es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Displaced vacuum exp(beta a^dag - conj(beta) a)|vac> on the given mode,
// other subsystems in their 0 level unless a base ket is supplied.
inline Vec displaced_vacuum(const SystemLayout& layout, int mode_index, Complex beta,
                            const Vec* base = nullptr) {
  const Mat a = make_destroy(layout, mode_index).matrix;
  const Mat gen = beta * a.adjoint() - std::conj(beta) * a;  // anti-Hermitian
  // exp of anti-Hermitian: i*gen is Hermitian
  const Mat h = Mat(-I * gen);
  const Mat u = expm_hermitian_times(h, I);  // exp(i * h) = exp(gen)
  Vec v0;
  if (base) {
    v0 = *base;
  } else {
    std::vector<int> levels(static_cast<size_t>(layout.size()), 0);
    v0 = basis_ket(layout, levels);
  }
  return u * v0;
}

// Partial trace down to a single subsystem (reduced density matrix).
inline Mat reduce_to_subsystem(const QuantumState& state, int index) {
  const SystemLayout& lay = state.layout;
  const int d = lay.at(index).dim();
  // strides
  int left = 1, right = 1;
  for (int i = 0; i < index; ++i) left *= lay.at(i).dim();
  for (int i = index + 1; i < lay.size(); ++i) right *= lay.at(i).dim();
  const Mat rho = state.density();
  Mat out = Mat::Zero(d, d);
  for (int l = 0; l < left; ++l)
    for (int r = 0; r < right; ++r)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const int row = (l * d + i) * right + r;
          const int col = (l * d + j) * right + r;
          out(i, j) += rho(row, col);
        }
  return out;
}

inline double von_neumann_entropy(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double p = es.eigenvalues()(k);
    if (p > 1e-14) s -= p * std::log(p);
  }
  return s;
}

}  // namespace uscsim

#pragma once
// Circuit/cavity coupling-strength calculators: zero-point voltage/current,
// capacitive and galvanic coupling formulas, wire inductances, magnon and
// molecular collective couplings, the cooperativity-based figure of merit,
// and table ingestion with recomputation/discrepancy reporting.

#include <fstream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core.hpp"

namespace uscsim {
namespace constants {
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double h_planck = 6.62607015e-34;   // J s
inline constexpr double e_charge = 1.602176634e-19;  // C
inline constexpr double mu0 = 1.25663706212e-6;      // N / A^2
inline constexpr double eps0 = 8.8541878128e-12;     // F / m
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
inline constexpr double z_vacuum = 376.73;           // ohm
inline constexpr double alpha_fs = 7.2973525693e-3;  // fine-structure constant
inline constexpr double phi0 = h_planck / (2.0 * e_charge);  // flux quantum
inline constexpr double gyro_electron = 2.0 * PI * 28.0e9;   // rad/s per tesla
}  // namespace constants

namespace detail {
inline void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw InvalidSubsystem(std::string(name) + " must be positive");
}
}  // namespace detail

// ------------------------------------------------- zero-point field scales
inline double vrms_from_capacitance(double omega_r, double c_r) {
  detail::require_positive(omega_r, "omega_r");
  detail::require_positive(c_r, "C_r");
  return std::sqrt(constants::hbar * omega_r / (2.0 * c_r));
}
inline double vrms_from_impedance(double omega_r, double z) {
  detail::require_positive(omega_r, "omega_r");
  detail::require_positive(z, "Z");
  return omega_r * std::sqrt(constants::hbar * z / 2.0);
}
inline double irms_from_inductance(double omega_r, double l_r) {
  detail::require_positive(omega_r, "omega_r");
  detail::require_positive(l_r, "L_r");
  return std::sqrt(constants::hbar * omega_r / (2.0 * l_r));
}
inline double irms_from_impedance(double omega_r, double z) {
  detail::require_positive(omega_r, "omega_r");
  detail::require_positive(z, "Z");
  return omega_r * std::sqrt(constants::hbar / (2.0 * z));
}

// ---------------------------------------------------- capacitive couplings
struct CapacitiveParams {
  double e_j = 0.0;   // Josephson energy
  double e_c = 0.0;   // charging energy
  double c_g = 0.0;   // coupling capacitance
  double c_q = 0.0;   // qubit capacitance (C_J for the charge qubit form)
  double c_r = 0.0;   // resonator capacitance
  double z = 50.0;    // resonator impedance
};

// transmon, reduced form: g/w_r = (1/sqrt(2 pi^3)) (E_J/8E_C)^{1/4}
//                                 sqrt(Z/Z_vac) C_g/(C_g+C_q) alpha^{1/2}
inline double coupling_capacitive_transmon(const CapacitiveParams& p) {
  detail::require_positive(p.e_j, "E_J");
  detail::require_positive(p.e_c, "E_C");
  return (1.0 / std::sqrt(2.0 * PI * PI * PI)) * std::pow(p.e_j / (8.0 * p.e_c), 0.25) *
         std::sqrt(p.z / constants::z_vacuum) * (p.c_g / (p.c_g + p.c_q)) *
         std::sqrt(constants::alpha_fs);
}

// circuit bound on the normalized capacitive coupling (< 1 for any positive
// capacitances): g/w_r = C_g / sqrt(C_r (C_q + C_g) + C_g (C_g + C_q))
inline double coupling_capacitive_bound(double c_g, double c_q, double c_r) {
  detail::require_positive(c_g, "C_g");
  detail::require_positive(c_q, "C_q");
  detail::require_positive(c_r, "C_r");
  return c_g / std::sqrt(c_r * (c_q + c_g) + c_g * (c_g + c_q));
}

struct CpbCoupling {
  double reduced = 0.0;       // impedance form
  double circuit_form = 0.0;  // capacitance-ratio form with sqrt(E_C/E_J)
  bool dsc_reachable = false; // circuit form exceeding 1
};

// charge qubit: reduced g/w_r = (1/sqrt(8 pi)) sqrt(Z/Z_vac)
//                               C_g/(C_g+C_J) alpha^{1/2}
// circuit form: 2 C_g / sqrt(C_r (C_q+C_g) + C_g (C_g+C_q)) * sqrt(E_C/E_J)
inline CpbCoupling coupling_capacitive_cpb(const CapacitiveParams& p) {
  detail::require_positive(p.e_j, "E_J");
  detail::require_positive(p.e_c, "E_C");
  CpbCoupling out;
  out.reduced = (1.0 / std::sqrt(8.0 * PI)) * std::sqrt(p.z / constants::z_vacuum) *
                (p.c_g / (p.c_g + p.c_q)) * std::sqrt(constants::alpha_fs);
  out.circuit_form = 2.0 * p.c_g /
                     std::sqrt(p.c_r * (p.c_q + p.c_g) + p.c_g * (p.c_g + p.c_q)) *
                     std::sqrt(p.e_c / p.e_j);
  out.dsc_reachable = out.circuit_form > 1.0;
  return out;
}

// ------------------------------------------------------ galvanic couplings
enum class GalvanicKind { LinearInductor, SharedJunction, ChargeEmbedded, TransmonResonator };

struct GalvanicParams {
  double omega_r = 0.0;      // resonator angular frequency
  double l_r = 0.0;          // resonator inductance
  double z = 50.0;           // resonator impedance
  double phi_01 = 0.0;       // <0|phase|1> matrix element (dimensionless)
  double phi_z = 0.0;        // (<1|phase|1> - <0|phase|0>)/2
  double q_01_over_e = 0.0;  // <0|charge|1>/e
  double c_r = 0.0, c_q = 0.0;  // for the charge-embedded form
  double e_j = 0.0, e_c = 0.0;  // for the transmon-resonator form (energies)
  double l_shared = 0.0;        // shared inductance (dipolar-energy form)
  double i_p = 0.0;             // persistent current
};

// dipolar-energy coupling hbar g = L I_p I_rms
inline double coupling_galvanic_dipolar(const GalvanicParams& p) {
  return p.l_shared * p.i_p * irms_from_inductance(p.omega_r, p.l_r) / constants::hbar;
}

// flux-type matrix-element forms:
//   hbar g_x = I_rms (Phi_0/2pi) <0|phi|1>    (transverse)
//   hbar g_z = I_rms (Phi_0/2pi) (<1|phi|1>-<0|phi|0>)/2  (longitudinal)
inline double coupling_galvanic_gx(const GalvanicParams& p) {
  return irms_from_inductance(p.omega_r, p.l_r) * (constants::phi0 / (2.0 * PI)) * p.phi_01 /
         constants::hbar;
}
inline double coupling_galvanic_gz(const GalvanicParams& p) {
  return irms_from_inductance(p.omega_r, p.l_r) * (constants::phi0 / (2.0 * PI)) * p.phi_z /
         constants::hbar;
}

struct GalvanicResult {
  double g_over_omega = 0.0;
  double omega_used = 0.0;  // loaded frequency for the charge-embedded form
};

inline GalvanicResult coupling_galvanic(const GalvanicParams& p, GalvanicKind kind) {
  GalvanicResult out;
  out.omega_used = p.omega_r;
  switch (kind) {
    case GalvanicKind::LinearInductor:
      // impedance form: g/w_r = (1/8) sqrt(Z_vac/(pi Z)) alpha^{-1/2} <0|phi|1>
      detail::require_positive(p.z, "Z");
      out.g_over_omega = (1.0 / 8.0) * std::sqrt(constants::z_vacuum / (PI * p.z)) *
                         p.phi_01 / std::sqrt(constants::alpha_fs);
      break;
    case GalvanicKind::SharedJunction:
      // same impedance form; the junction provides a large <0|phi|1> ~ 1
      detail::require_positive(p.z, "Z");
      out.g_over_omega = (1.0 / 8.0) * std::sqrt(constants::z_vacuum / (PI * p.z)) *
                         p.phi_01 / std::sqrt(constants::alpha_fs);
      break;
    case GalvanicKind::ChargeEmbedded: {
      // loaded resonator: 1/C_p = 1/C_r + 1/C_q, w_r' = 1/sqrt(L_r C_p),
      // Z_r' = sqrt(L_r/C_p);
      // g/w_r' = C_r/(C_q+C_r) (<0|Q|1>/e) sqrt(2 pi Z_r'/Z_vac) alpha^{1/2}
      detail::require_positive(p.c_r, "C_r");
      detail::require_positive(p.c_q, "C_q");
      detail::require_positive(p.l_r, "L_r");
      const double c_p = 1.0 / (1.0 / p.c_r + 1.0 / p.c_q);
      const double w_loaded = 1.0 / std::sqrt(p.l_r * c_p);
      const double z_loaded = std::sqrt(p.l_r / c_p);
      out.omega_used = w_loaded;
      out.g_over_omega = (p.c_r / (p.c_q + p.c_r)) * p.q_01_over_e *
                         std::sqrt(2.0 * PI * z_loaded / constants::z_vacuum) *
                         std::sqrt(constants::alpha_fs);
      break;
    }
    case GalvanicKind::TransmonResonator: {
      // g/w_r = (1/sqrt(8 pi)) (E_C/(8(E_J+E_L)))^{1/4} sqrt(Z_vac/Z) alpha^{-1/2}
      // with E_L = (Phi_0/2pi)^2 / L_r
      detail::require_positive(p.e_j, "E_J");
      detail::require_positive(p.e_c, "E_C");
      detail::require_positive(p.l_r, "L_r");
      detail::require_positive(p.z, "Z");
      const double e_l =
          (constants::phi0 / (2.0 * PI)) * (constants::phi0 / (2.0 * PI)) / p.l_r;
      out.g_over_omega = (1.0 / std::sqrt(8.0 * PI)) *
                         std::pow(p.e_c / (8.0 * (p.e_j + e_l)), 0.25) *
                         std::sqrt(constants::z_vacuum / p.z) /
                         std::sqrt(constants::alpha_fs);
      break;
    }
  }
  return out;
}

// ------------------------------------------------------------ inductances
struct WireGeometry {
  double length = 0.0;   // l
  double width = 0.0;    // w
  double thickness = 0.0;  // t
  double lambda_l = 0.0;   // London penetration depth (optional)
  double r_n = 0.0;        // normal-state resistance (optional)
  double t_c = 0.0;        // critical temperature (optional)
  double i_c = 0.0;        // junction critical current (optional)
};

struct Inductances {
  double geometric = 0.0;  // L_G
  double kinetic = 0.0;    // L_K
  double josephson = 0.0;  // L_J
};

inline Inductances inductances(const WireGeometry& g) {
  Inductances out;
  if (g.length > 0.0 && g.width + g.thickness > 0.0)
    out.geometric = (constants::mu0 * g.length / (2.0 * PI)) *
                    (std::log(2.0 * g.length / (g.width + g.thickness)) + 0.5);
  if (g.lambda_l > 0.0 && g.width > 0.0 && g.thickness > 0.0)
    out.kinetic = constants::mu0 * g.lambda_l * g.lambda_l * g.length / (g.width * g.thickness);
  else if (g.r_n > 0.0 && g.t_c > 0.0)
    out.kinetic = 0.14 * constants::hbar * g.r_n / (constants::k_boltzmann * g.t_c);
  if (g.i_c > 0.0) out.josephson = constants::phi0 / (2.0 * PI * g.i_c);
  return out;
}

// --------------------------------------------------- collective couplings
struct MagnonParams {
  double eta = 1.0;       // mode-overlap factor in (0, 1]
  double omega_c = 0.0;   // cavity angular frequency
  double v_c = 0.0;       // cavity mode volume
  double n_spins = 1.0;
};

struct MagnonCoupling {
  double g0 = 0.0;          // single spin (angular frequency)
  double g_collective = 0.0;  // g0 sqrt(N)
};

// g0/2pi = eta (gamma/2pi) sqrt(hbar w_c mu0 / (2 V_c)); collective g = g0 sqrt(N)
inline MagnonCoupling coupling_magnon(const MagnonParams& p) {
  detail::require_positive(p.omega_c, "omega_c");
  detail::require_positive(p.v_c, "V_c");
  if (!(p.eta > 0.0 && p.eta <= 1.0)) throw InvalidSubsystem("eta must be in (0,1]");
  MagnonCoupling out;
  out.g0 = p.eta * constants::gyro_electron *
           std::sqrt(constants::hbar * p.omega_c * constants::mu0 / (2.0 * p.v_c));
  out.g_collective = out.g0 * std::sqrt(p.n_spins);
  return out;
}

struct MoleculeParams {
  double d0 = 0.0;       // single-molecule dipole moment
  double n_molecules = 1.0;
  double omega_c = 0.0;
  double v_c = 0.0;
};

// hbar g = d sqrt(hbar w_c / (2 eps0 V_c)) with d = d0 sqrt(N)
inline double coupling_molecule(const MoleculeParams& p) {
  detail::require_positive(p.omega_c, "omega_c");
  detail::require_positive(p.v_c, "V_c");
  const double d = p.d0 * std::sqrt(p.n_molecules);
  return d * std::sqrt(constants::hbar * p.omega_c / (2.0 * constants::eps0 * p.v_c)) /
         constants::hbar;
}

// ------------------------------------------------------- figure of merit U
enum class CooperativityConvention { C1, C4 };  // C = g^2/(kappa gamma) or 4 g^2/(kappa gamma)

inline double figure_of_merit_U(double g, double omega, double kappa, double gamma,
                                CooperativityConvention conv) {
  detail::require_positive(kappa, "kappa");
  detail::require_positive(gamma, "gamma");
  detail::require_positive(omega, "omega");
  const double c = (conv == CooperativityConvention::C4 ? 4.0 : 1.0) * g * g / (kappa * gamma);
  return std::sqrt(c * g / omega);
}

// ----------------------------------------------------------- table ingest
struct ExperimentRecord {
  std::string ref;
  std::string platform;
  std::optional<double> gamma;  // in the printed unit
  std::optional<double> kappa;
  std::optional<double> g;
  std::optional<double> omega0;
  std::string unit;  // MHz, GHz (g in MHz, omega in GHz) or meV
  std::optional<double> printed_g_over_omega_pct;
  int printed_ratio_decimals = 0;  // decimals of the printed percentage
  std::optional<double> printed_u;
  std::string notes;
};

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') { quoted = !quoted; continue; }
    if (c == ',' && !quoted) { out.push_back(cur); cur.clear(); continue; }
    cur.push_back(c);
  }
  out.push_back(cur);
  return out;
}
inline std::optional<double> parse_optional(const std::string& s, int lineno) {
  if (s.empty()) return std::nullopt;
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(lineno) + ": bad numeric field '" + s + "'");
  }
}
inline int decimals_of(const std::string& s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos) return 0;
  return static_cast<int>(s.size() - dot - 1);
}
}  // namespace detail

// schema: ref,platform,gamma,kappa,g,omega0,unit,printed_g_over_omega_pct,printed_U,notes
inline std::vector<ExperimentRecord> ingest_table(std::istream& in) {
  std::vector<ExperimentRecord> out;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto f = detail::split_csv_line(line);
    if (!header_seen) {
      if (f.size() < 10 || f[0] != "ref")
        throw ParseError("line " + std::to_string(lineno) + ": missing or malformed header");
      header_seen = true;
      continue;
    }
    if (f.size() != 10)
      throw ParseError("line " + std::to_string(lineno) + ": expected 10 fields, got " +
                       std::to_string(f.size()));
    ExperimentRecord r;
    r.ref = f[0];
    r.platform = f[1];
    r.gamma = detail::parse_optional(f[2], lineno);
    r.kappa = detail::parse_optional(f[3], lineno);
    r.g = detail::parse_optional(f[4], lineno);
    r.omega0 = detail::parse_optional(f[5], lineno);
    r.unit = f[6];
    r.printed_g_over_omega_pct = detail::parse_optional(f[7], lineno);
    r.printed_ratio_decimals = detail::decimals_of(f[7]);
    r.printed_u = detail::parse_optional(f[8], lineno);
    r.notes = f[9];
    if (r.unit != "MHz" && r.unit != "GHz" && r.unit != "meV")
      throw ParseError("line " + std::to_string(lineno) + ": unknown unit '" + r.unit + "'");
    out.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError("line 1: empty table");
  return out;
}

inline std::vector<ExperimentRecord> ingest_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open table file: " + path);
  return ingest_table(in);
}

// per-row recomputation result
struct RowReport {
  std::string ref;
  std::optional<double> recomputed_ratio_pct;
  std::optional<double> ratio_rel_dev;      // vs printed
  bool ratio_within_rounding = false;       // inside the printed rounding interval
  std::optional<double> recomputed_u_c1;
  std::optional<double> recomputed_u_c4;
  std::optional<double> u_rel_dev;          // under the selected convention
  bool flagged = false;                     // deviation beyond threshold
};

struct TableReport {
  CooperativityConvention convention = CooperativityConvention::C1;
  std::vector<RowReport> rows;
  bool convention_conflict_flag = false;  // captions quote C4 while values match C1
  std::vector<std::string> flagged_refs;
};

// g and omega0 in a common frequency scale for the ratio; units: for the
// circuit table g is MHz and omega0 GHz (x1000), for the meV table both meV.
inline double ratio_percent(const ExperimentRecord& r) {
  const double scale = (r.unit == "GHz") ? 1000.0 : 1.0;
  return 100.0 * (*r.g) / ((*r.omega0) * scale);
}

inline TableReport recompute_and_report(const std::vector<ExperimentRecord>& records,
                                        CooperativityConvention conv, double flag_threshold = 0.05) {
  TableReport rep;
  rep.convention = conv;
  // values of the circuit table match C1 while every caption states C4
  rep.convention_conflict_flag = (conv == CooperativityConvention::C1);
  for (const auto& r : records) {
    RowReport row;
    row.ref = r.ref;
    if (r.g && r.omega0) {
      row.recomputed_ratio_pct = ratio_percent(r);
      if (r.printed_g_over_omega_pct) {
        const double printed = *r.printed_g_over_omega_pct;
        row.ratio_rel_dev = std::abs(*row.recomputed_ratio_pct - printed) /
                            std::max(std::abs(printed), 1e-300);
        const double half = 0.5 * std::pow(10.0, -r.printed_ratio_decimals);
        row.ratio_within_rounding =
            std::abs(*row.recomputed_ratio_pct - printed) <= half + 1e-12;
      }
      if (r.kappa && r.gamma && *r.kappa > 0 && *r.gamma > 0) {
        const double ratio = *row.recomputed_ratio_pct / 100.0;
        row.recomputed_u_c1 = std::sqrt((*r.g) * (*r.g) / ((*r.kappa) * (*r.gamma)) * ratio);
        row.recomputed_u_c4 =
            std::sqrt(4.0 * (*r.g) * (*r.g) / ((*r.kappa) * (*r.gamma)) * ratio);
        if (r.printed_u) {
          const double u = conv == CooperativityConvention::C1 ? *row.recomputed_u_c1
                                                               : *row.recomputed_u_c4;
          row.u_rel_dev = std::abs(u - *r.printed_u) / std::max(std::abs(*r.printed_u), 1e-300);
        }
      }
    }
    const bool ratio_bad = row.ratio_rel_dev && *row.ratio_rel_dev > flag_threshold &&
                           !row.ratio_within_rounding;
    const bool u_bad = row.u_rel_dev && *row.u_rel_dev > flag_threshold;
    row.flagged = ratio_bad || u_bad;
    if (row.flagged) rep.flagged_refs.push_back(row.ref);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline nlohmann::json report_to_json(const TableReport& rep) {
  nlohmann::json j;
  j["convention"] = rep.convention == CooperativityConvention::C1 ? "C1" : "C4";
  j["convention_conflict_flag"] = rep.convention_conflict_flag;
  j["flagged_refs"] = rep.flagged_refs;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    nlohmann::json row;
    row["ref"] = r.ref;
    if (r.recomputed_ratio_pct) row["recomputed_g_over_omega_pct"] = *r.recomputed_ratio_pct;
    if (r.ratio_rel_dev) row["ratio_rel_dev"] = *r.ratio_rel_dev;
    row["ratio_within_rounding"] = r.ratio_within_rounding;
    if (r.recomputed_u_c1) row["recomputed_U_C1"] = *r.recomputed_u_c1;
    if (r.recomputed_u_c4) row["recomputed_U_C4"] = *r.recomputed_u_c4;
    if (r.u_rel_dev) row["U_rel_dev"] = *r.u_rel_dev;
    row["flagged"] = r.flagged;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

}  // namespace uscsim

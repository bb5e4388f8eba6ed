// uscsim command-line front end.
//
// Subcommands: spectrum, dynamics, master, trotter, analog-compare,
// protocols (ghz|cphase|noon|dirac), circuit, tables.
// Exit codes: 0 ok, 2 parse error, 3 numerical failure, 4 precondition violation.

#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include <uscsim/io.hpp>
#include <uscsim/uscsim.hpp>

using namespace uscsim;
using nlohmann::json;

namespace {

struct Common {
  std::string spec_path;
  std::string out_path;
  std::string format = "csv";
  int n_max = 0;  // 0 -> resolved from USCSIM_NMAX or the built-in default
  int jobs = 1;
  bool dry_run = false;
};

int resolved_nmax(const Common& c, int fallback = 20) {
  if (c.n_max > 0) return c.n_max;
  if (const char* env = std::getenv("USCSIM_NMAX")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return fallback;
}

void add_common(CLI::App* cmd, Common& c, bool needs_spec = true) {
  auto* spec = cmd->add_option("--spec", c.spec_path, "input spec (JSON; CSV for tables)");
  if (needs_spec) spec->required();
  cmd->add_option("--out", c.out_path, "output file path")->required();
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--nmax", c.n_max, "boson truncation override (env USCSIM_NMAX)");
  cmd->add_option("--jobs", c.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  cmd->add_flag("--dry-run", c.dry_run, "print the resolved plan and exit");
}

json load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("spec JSON: ") + e.what());
  }
}

std::string config_line(const std::string& cmd, const Common& c, const json& extra = {}) {
  json j;
  j["command"] = cmd;
  j["version"] = library_version;
  j["spec"] = c.spec_path;
  j["format"] = c.format;
  j["nmax"] = resolved_nmax(c);
  // --jobs is an execution detail: output must be byte-identical for any
  // worker count, so it is not recorded in the run configuration
  if (!extra.empty()) j["resolved"] = extra;
  return j.dump();
}

bool dry(const Common& c, const std::string& cmd, const json& plan) {
  if (!c.dry_run) return false;
  json j = plan;
  j["command"] = cmd;
  j["version"] = library_version;
  j["dry_run"] = true;
  std::cout << j.dump(2) << "\n";
  return true;
}

void write_series_csv(const Common& c, const std::string& cfg,
                      const std::vector<std::string>& cols,
                      const std::vector<std::vector<double>>& rows) {
  CsvWriter w(c.out_path);
  w.comment(cfg);
  w.header(cols);
  for (const auto& r : rows) w.row_doubles(r);
}

void write_series(const Common& c, const std::string& cmd,
                  const std::vector<std::string>& cols,
                  const std::vector<std::vector<double>>& rows, const json& meta = {}) {
  const std::string cfg = config_line(cmd, c, meta);
  if (c.format == "csv") {
    write_series_csv(c, cfg, cols, rows);
    return;
  }
  json j;
  j["config"] = json::parse(cfg);
  j["columns"] = cols;
  j["rows"] = rows;
  if (!meta.empty()) j["meta"] = meta;
  std::ofstream out(c.out_path);
  if (!out) throw ParseError("cannot open output file: " + c.out_path);
  out << j.dump(2) << "\n";
}

Vec initial_state(const json& spec, const SystemLayout& lay) {
  std::vector<int> levels(static_cast<size_t>(lay.size()), 0);
  if (spec.contains("initial")) levels = spec.at("initial").get<std::vector<int>>();
  if (static_cast<int>(levels.size()) != lay.size())
    throw ParseError("'initial' length does not match the model layout");
  return basis_ket(lay, levels);
}

TimeGrid grid_from(const json& spec, double t1_default = 10.0, int steps_default = 200) {
  const double t0 = spec.value("t0", 0.0);
  const double t1 = spec.value("t1", t1_default);
  const int steps = spec.value("steps", steps_default);
  return TimeGrid(t0, t1, steps);
}

// ------------------------------------------------------------ subcommands
int cmd_spectrum(const Common& c) {
  const json spec = load_spec(c.spec_path);
  const ModelSpec model = spec.at("model").get<ModelSpec>();
  const int n_max = resolved_nmax(c);
  const int n_levels = spec.value("levels", 0);
  if (dry(c, "spectrum", {{"nmax", n_max}, {"levels", n_levels}})) return 0;
  const SystemLayout lay = default_layout(model, n_max);
  const COperator h = build_static(model, lay);
  Eigensystem es;
  bool labeled = false;
  if (lay.size() == 2 && lay.at(0).kind == Subsystem::Kind::Qubit &&
      lay.at(1).kind == Subsystem::Kind::BosonMode) {
    es = eigensystem(h);
    labeled = true;
  } else {
    es = eigensystem_basic(h);
  }
  const int count = n_levels > 0 ? std::min(n_levels, es.dim()) : es.dim();
  json meta;
  if (const QRM* q = std::get_if<QRM>(&model.v)) {
    meta["regime"] = regime_name(classify_regime(q->g, q->omega));
    meta["g_over_omega"] = q->g / q->omega;
  }
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < count; ++k)
    rows.push_back({double(k), es.energies(k),
                    labeled ? double(es.parity[static_cast<size_t>(k)]) : 0.0});
  write_series(c, "spectrum", {"index", "energy", "parity"}, rows, meta);
  return 0;
}

int cmd_dynamics(const Common& c) {
  const json spec = load_spec(c.spec_path);
  const ModelSpec model = spec.at("model").get<ModelSpec>();
  const int n_max = resolved_nmax(c);
  const TimeGrid grid = grid_from(spec);
  if (dry(c, "dynamics", {{"nmax", n_max}, {"t1", grid.t1}, {"steps", grid.n_steps}}))
    return 0;
  const SystemLayout lay = default_layout(model, n_max);
  const Vec psi0 = initial_state(spec, lay);
  PropagationResult res;
  if (std::holds_alternative<DrivenJC>(model.v)) {
    const DrivenJC& d = std::get<DrivenJC>(model.v);
    const double wmax = std::max({d.Omega, d.omega, d.omega_1, d.omega_2});
    res = propagate_timedep(build_driven(model, lay), lay, psi0, grid, wmax);
  } else {
    res = propagate_static(build_static(model, lay), psi0, grid);
  }
  const RVec ret = revival_probability(psi0, res);
  // mean photon number of the first boson mode, if any
  int mode = -1;
  for (int i = 0; i < lay.size(); ++i)
    if (lay.at(i).kind == Subsystem::Kind::BosonMode) { mode = i; break; }
  std::vector<std::vector<double>> rows;
  for (Eigen::Index k = 0; k < res.times.size(); ++k) {
    double nbar = 0.0;
    if (mode >= 0)
      nbar = photon_statistics(
                 QuantumState::from_ket(lay, res.states[static_cast<size_t>(k)]), mode)
                 .mean;
    rows.push_back({res.times(k), ret(k), ret(k) * ret(k), nbar});
  }
  json meta;
  meta["max_norm_drift"] = res.max_norm_drift;
  meta["truncation_flag"] = res.truncation_flag;
  write_series(c, "dynamics", {"time", "return_amplitude", "return_probability", "mean_photons"},
               rows, meta);
  return 0;
}

int cmd_master(const Common& c) {
  const json spec = load_spec(c.spec_path);
  const ModelSpec model = spec.at("model").get<ModelSpec>();
  const int n_max = resolved_nmax(c);
  LindbladSpec lind;
  if (spec.contains("lindblad")) {
    const json& l = spec.at("lindblad");
    lind.kappa0 = l.value("kappa0", 0.0);
    lind.gamma0 = l.value("gamma0", 0.0);
    lind.gphi0 = l.value("gphi0", 0.0);
  }
  const TimeGrid grid = grid_from(spec);
  if (dry(c, "master",
          {{"nmax", n_max}, {"kappa0", lind.kappa0}, {"gamma0", lind.gamma0},
           {"t1", grid.t1}}))
    return 0;
  const SystemLayout lay = default_layout(model, n_max);
  if (!(lay.size() == 2 && lay.at(0).kind == Subsystem::Kind::Qubit))
    throw InvalidSubsystem("master requires a single qubit-mode model");
  const COperator h = build_static(model, lay);
  const Eigensystem es = eigensystem(h);
  const DressedRates rates = dressed_rates(es, lind);
  const OutputChannelParams op;
  const Mat pdot = output_emission_operator(es, op);
  const Mat nop_eig =
      es.vectors.adjoint() * make_number(lay, 1).matrix * es.vectors;
  // initial state: eigenbasis projector onto "initial_level" (default: excited bare state)
  Mat rho = Mat::Zero(es.dim(), es.dim());
  if (spec.contains("initial")) {
    const Vec bare = initial_state(spec, lay);
    const Vec in_eig = es.vectors.adjoint() * bare;
    rho = in_eig * in_eig.adjoint();
  } else {
    rho(spec.value("initial_level", 1), spec.value("initial_level", 1)) = 1.0;
  }
  auto rhs = [&](double, const Mat& r) { return dressed_lindblad_rhs(r, es, rates); };
  const double dt = std::min(grid.dt(), dressed_step_bound(es, rates));
  std::vector<std::vector<double>> rows;
  for (Eigen::Index k = 0; k <= grid.n_steps; ++k) {
    const double t = grid.t0 + grid.dt() * k;
    if (k > 0) rho = evolve_density(rho, rhs, t - grid.dt(), t, dt);
    const double pop0 = std::real(rho(0, 0));
    const double nbar = std::real((nop_eig * rho).trace());
    rows.push_back({t, pop0, nbar, emission_flux(rho, pdot, op)});
  }
  write_series(c, "master", {"time", "ground_population", "mean_photons", "emission_flux"},
               rows);
  return 0;
}

int cmd_trotter(const Common& c) {
  const json spec = load_spec(c.spec_path);
  const ModelSpec model = spec.at("model").get<ModelSpec>();
  const QRM* q = std::get_if<QRM>(&model.v);
  if (!q) throw ParseError("trotter requires a QRM model spec");
  const QRM target = *q;
  const double total_time = spec.value("total_time", 2.0 * PI);
  std::vector<int> ns = spec.value("n_list", std::vector<int>{8, 16, 32, 64, 128});
  const int n_max = resolved_nmax(c, 30);
  if (dry(c, "trotter", {{"nmax", n_max}, {"total_time", total_time}, {"n_list", ns}}))
    return 0;
  const SystemLayout lay = SystemLayout::qubit_mode(n_max);
  std::vector<int> levels(static_cast<size_t>(lay.size()), 0);
  levels[0] = 1;
  Vec psi0 = spec.contains("initial") ? initial_state(spec, lay) : basis_ket(lay, levels);
  // sharded sweep, merged in input order
  std::vector<double> infid(ns.size(), 0.0);
  const int jobs = std::max(1, std::min<int>(c.jobs, static_cast<int>(ns.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&, w]() {
      for (size_t i = static_cast<size_t>(w); i < ns.size(); i += static_cast<size_t>(jobs)) {
        auto r = trotter_evolve(make_trotter_plan(target, total_time, ns[i]), target, psi0, lay);
        infid[i] = 1.0 - r.fidelity;
      }
    });
  for (auto& t : pool) t.join();
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < ns.size(); ++i)
    rows.push_back({double(ns[i]), infid[i]});
  write_series(c, "trotter", {"n_steps", "infidelity"}, rows);
  return 0;
}

int cmd_analog_compare(const Common& c) {
  const json spec = load_spec(c.spec_path);
  const ModelSpec model = spec.at("model").get<ModelSpec>();
  const DrivenJC* d = std::get_if<DrivenJC>(&model.v);
  if (!d) throw ParseError("analog-compare requires a DrivenJC model spec");
  const int n_max = resolved_nmax(c, 10);
  const TimeGrid grid = grid_from(spec, 2.0 * PI / (2.0 * std::max(d->Omega_1, 1e-12)), 4000);
  if (dry(c, "analog-compare", {{"nmax", n_max}, {"t1", grid.t1}, {"steps", grid.n_steps}}))
    return 0;
  const SystemLayout lay = SystemLayout::qubit_mode(n_max);
  const Vec psi0 = initial_state(spec, lay);
  auto cmp = analog_compare(*d, psi0, grid, n_max);
  std::vector<std::vector<double>> rows;
  for (Eigen::Index k = 0; k < cmp.times.size(); ++k)
    rows.push_back({cmp.times(k), cmp.fidelity(k)});
  json meta;
  meta["min_fidelity"] = cmp.min_fidelity;
  write_series(c, "analog-compare", {"time", "fidelity"}, rows, meta);
  return 0;
}

int cmd_protocol_ghz(const Common& c) {
  const json spec = load_spec(c.spec_path);
  const int n_qubits = spec.value("n_qubits", 2);
  const double omega = spec.value("omega", 1.0);
  const double g = spec.value("g", omega / 8.0);
  const double t_final = spec.value("t_final", ghz_min_time(g, omega));
  const int n_max = resolved_nmax(c, 12);
  if (dry(c, "protocols ghz",
          {{"n_qubits", n_qubits}, {"g", g}, {"omega", omega}, {"t_final", t_final},
           {"nmax", n_max}}))
    return 0;
  auto r = ghz_protocol(n_qubits, g, omega, t_final, n_max);
  json j;
  j["config"] = json::parse(config_line("protocols ghz", c));
  j["fidelity"] = r.fidelity;
  j["time"] = r.time;
  j["commensurate"] = r.commensurate;
  j["min_time"] = ghz_min_time(g, omega);
  std::ofstream out(c.out_path);
  if (!out) throw ParseError("cannot open output file: " + c.out_path);
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_protocol_cphase(const Common& c) {
  const json spec = load_spec(c.spec_path);
  LongitudinalTwoQubit base;
  base.omega = spec.value("omega", 1.0);
  base.g1 = spec.value("g1", std::sqrt((PI / 4.0) / (8.0 * (1.0 + PI / 2.0))));
  base.g2 = spec.value("g2", base.g1);
  const double t1 = spec.value("t1", PI / (2.0 * base.omega));
  const int n_max = resolved_nmax(c, 40);
  if (dry(c, "protocols cphase", {{"g1", base.g1}, {"g2", base.g2}, {"t1", t1}, {"nmax", n_max}}))
    return 0;
  auto r = cphase_sequence(base, t1, n_max);
  json j;
  j["config"] = json::parse(config_line("protocols cphase", c));
  j["entangling_phase"] = r.entangling_phase;
  j["predicted_phase"] = r.predicted_phase;
  j["worst_return"] = r.worst_return;
  j["fidelity"] = r.cphase_fidelity;
  std::ofstream out(c.out_path);
  if (!out) throw ParseError("cannot open output file: " + c.out_path);
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_protocol_noon(const Common& c) {
  const json spec = load_spec(c.spec_path);
  OptomechPair m;
  m.omega_M = spec.value("omega_M", 1.0);
  m.omega_R = spec.value("omega_R", 10.0);
  m.g_M = spec.value("g_M", 1.0);
  m.g_R = spec.value("g_R", 0.05);
  const int n_target = spec.value("n_target", 2);
  const int n_max = resolved_nmax(c, 6);
  if (dry(c, "protocols noon", {{"n_target", n_target}, {"nmax", n_max}})) return 0;
  auto r = noon_protocol(m, n_target, n_max);
  json j;
  j["config"] = json::parse(config_line("protocols noon", c));
  j["fidelity"] = r.fidelity;
  j["hop_time"] = r.hop_time;
  j["g_eff"] = r.g_eff;
  std::ofstream out(c.out_path);
  if (!out) throw ParseError("cannot open output file: " + c.out_path);
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_protocol_dirac(const Common& c) {
  const json spec = load_spec(c.spec_path);
  DiracEffective m;
  m.lambda = spec.value("lambda", 0.0);
  m.g = spec.value("g", 0.2);
  m.xi = spec.value("xi", 0.0);
  const double x0 = spec.value("x0", 0.0);
  const double p0 = spec.value("p0", 0.0);
  const TimeGrid grid = grid_from(spec);
  const int n_max = resolved_nmax(c, 30);
  if (dry(c, "protocols dirac", {{"lambda", m.lambda}, {"g", m.g}, {"xi", m.xi}, {"nmax", n_max}}))
    return 0;
  auto tr = dirac_observables(m, x0, p0, grid, n_max);
  std::vector<std::vector<double>> rows;
  for (Eigen::Index k = 0; k < tr.times.size(); ++k)
    rows.push_back({tr.times(k), tr.x(k), tr.p(k)});
  write_series(c, "protocols dirac", {"time", "x", "p"}, rows);
  return 0;
}

int cmd_circuit(const Common& c) {
  const json spec = load_spec(c.spec_path);
  const std::string kind = spec.value("calculator", "");
  json out;
  out["config"] = json::parse(config_line("circuit", c));
  if (kind == "capacitive_transmon") {
    CapacitiveParams p;
    p.e_j = spec.value("E_J", 0.0);
    p.e_c = spec.value("E_C", 0.0);
    p.c_g = spec.value("C_g", 0.0);
    p.c_q = spec.value("C_q", 0.0);
    p.z = spec.value("Z", 50.0);
    if (dry(c, "circuit", {{"calculator", kind}})) return 0;
    out["g_over_omega"] = coupling_capacitive_transmon(p);
  } else if (kind == "galvanic") {
    GalvanicParams p;
    p.z = spec.value("Z", 50.0);
    p.phi_01 = spec.value("phi_01", 0.0);
    if (dry(c, "circuit", {{"calculator", kind}})) return 0;
    out["g_over_omega"] =
        coupling_galvanic(p, GalvanicKind::SharedJunction).g_over_omega;
  } else if (kind == "figure_of_merit") {
    const std::string conv = spec.value("convention", "C1");
    if (dry(c, "circuit", {{"calculator", kind}, {"convention", conv}})) return 0;
    out["U"] = figure_of_merit_U(
        spec.at("g").get<double>(), spec.at("omega").get<double>(),
        spec.at("kappa").get<double>(), spec.at("gamma").get<double>(),
        conv == "C4" ? CooperativityConvention::C4 : CooperativityConvention::C1);
  } else {
    throw ParseError("unknown circuit calculator: '" + kind + "'");
  }
  std::ofstream f(c.out_path);
  if (!f) throw ParseError("cannot open output file: " + c.out_path);
  f << out.dump(2) << "\n";
  return 0;
}

int cmd_tables(const Common& c, const std::string& convention) {
  const CooperativityConvention conv =
      convention == "C4" ? CooperativityConvention::C4 : CooperativityConvention::C1;
  if (dry(c, "tables", {{"convention", convention}})) return 0;
  auto recs = ingest_table_file(c.spec_path);
  auto rep = recompute_and_report(recs, conv);
  json j = report_to_json(rep);
  j["config"] = json::parse(config_line("tables", c, {{"convention", convention}}));
  std::ofstream out(c.out_path);
  if (!out) throw ParseError("cannot open output file: " + c.out_path);
  out << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ultrastrong-coupling qubit-boson simulation toolkit"};
  app.require_subcommand(1);

  Common spectrum_c, dynamics_c, master_c, trotter_c, analog_c, circuit_c, tables_c;
  Common ghz_c, cphase_c, noon_c, dirac_c;
  std::string tables_convention = "C1";

  add_common(app.add_subcommand("spectrum", "eigenvalues with parity labels"), spectrum_c);
  add_common(app.add_subcommand("dynamics", "closed-system time series"), dynamics_c);
  add_common(app.add_subcommand("master", "dressed master-equation series"), master_c);
  add_common(app.add_subcommand("trotter", "digital-evolution error sweep"), trotter_c);
  add_common(app.add_subcommand("analog-compare", "driven vs effective-model fidelity"),
             analog_c);
  auto* protocols = app.add_subcommand("protocols", "state-preparation protocols");
  protocols->require_subcommand(1);
  add_common(protocols->add_subcommand("ghz", "collective-coupling GHZ preparation"), ghz_c);
  add_common(protocols->add_subcommand("cphase", "geometric controlled-phase loop"), cphase_c);
  add_common(protocols->add_subcommand("noon", "optomechanical NOON preparation"), noon_c);
  add_common(protocols->add_subcommand("dirac", "relativistic-analog observables"), dirac_c);
  add_common(app.add_subcommand("circuit", "coupling-strength calculators"), circuit_c);
  auto* tables = app.add_subcommand("tables", "experiment-table recomputation");
  add_common(tables, tables_c);
  tables->add_option("--convention", tables_convention, "cooperativity convention")
      ->check(CLI::IsMember({"C1", "C4"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("spectrum")) return cmd_spectrum(spectrum_c);
    if (app.got_subcommand("dynamics")) return cmd_dynamics(dynamics_c);
    if (app.got_subcommand("master")) return cmd_master(master_c);
    if (app.got_subcommand("trotter")) return cmd_trotter(trotter_c);
    if (app.got_subcommand("analog-compare")) return cmd_analog_compare(analog_c);
    if (app.got_subcommand("circuit")) return cmd_circuit(circuit_c);
    if (app.got_subcommand("tables")) return cmd_tables(tables_c, tables_convention);
    if (protocols->got_subcommand("ghz")) return cmd_protocol_ghz(ghz_c);
    if (protocols->got_subcommand("cphase")) return cmd_protocol_cphase(cphase_c);
    if (protocols->got_subcommand("noon")) return cmd_protocol_noon(noon_c);
    if (protocols->got_subcommand("dirac")) return cmd_protocol_dirac(dirac_c);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const UscError& e) {  // precondition violations
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

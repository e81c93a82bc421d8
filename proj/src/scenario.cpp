#include "ringlat/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ringlat/band.hpp"
#include "ringlat/dimer.hpp"
#include "ringlat/hetero.hpp"
#include "ringlat/lattice.hpp"
#include "ringlat/one_atom.hpp"

namespace ringlat {

namespace {

using nlohmann::json;

json require(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing required key '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& key) {
  json v = require(j, key);
  if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("key '" + key + "' must be finite");
  return d;
}

double number_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

int integer(const json& j, const std::string& key) {
  json v = require(j, key);
  if (!v.is_number_integer()) throw ConfigError("key '" + key + "' must be an integer");
  return v.get<int>();
}

int integer_or(const json& j, const std::string& key, int fallback) {
  return j.contains(key) ? integer(j, key) : fallback;
}

// Angles are raw radians (number) or multiples of pi via the string suffix
// convention: "pi", "-pi", "0.25pi", "1.5pi".
double angle_value(const json& v, const std::string& key) {
  if (v.is_number()) {
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError("key '" + key + "' must be finite");
    return d;
  }
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
      std::string head = s.substr(0, s.size() - 2);
      if (head.empty()) return pi;
      if (head == "-") return -pi;
      try {
        std::size_t used = 0;
        double f = std::stod(head, &used);
        if (used == head.size()) return f * pi;
      } catch (const std::exception&) {
      }
    }
    throw ConfigError("key '" + key + "': cannot parse angle '" + s + "'");
  }
  throw ConfigError("key '" + key + "' must be a number or a pi-suffixed string");
}

double angle(const json& j, const std::string& key) { return angle_value(require(j, key), key); }
double angle_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? angle_value(j.at(key), key) : fallback;
}

RampSchedule ramp_from(const json& j) {
  json r = require(j, "ramp");
  double phi0 = angle_or(r, "phi0", 0.0);
  double phi1 = angle(r, "phi1");
  double Tramp = number(r, "T_ramp");
  double Ttotal = number_or(r, "T_total", Tramp);
  double h = number_or(r, "step", 1e-2);
  if (Ttotal < Tramp) throw ConfigError("key 'T_total' must be >= 'T_ramp'");
  return RampSchedule::smooth(phi0, phi1, Tramp, Ttotal, h);
}

std::string out_path(const std::string& dir, const std::string& name, TableFormat fmt) {
  return dir + "/" + name + (fmt == TableFormat::Csv ? ".csv" : ".json");
}

struct CommandContext {
  json params;
  std::string outDir;
  TableFormat format;
  std::vector<std::string> written;

  void emit(const std::string& name, Metadata meta, const Table& table) {
    std::string path = out_path(outDir, name, format);
    emit_table(path, meta, table, format);
    written.push_back(path);
  }
};

void echo_params(Metadata& meta, const json& params) {
  meta.add("parameters", params.dump());
}

// --- band / wannier ---------------------------------------------------------

ContinuumProblem continuum_from(const json& p) {
  int N = integer(p, "N");
  double a = number_or(p, "a", 1.0);
  double mass = number_or(p, "mass", 1.0);
  auto lat = RingLattice::make(N, a);
  RotationSpec rot = p.contains("v")   ? RotationSpec::from_velocity(number(p, "v"), mass, lat)
                     : p.contains("Phi") ? RotationSpec::from_Phi(angle(p, "Phi"), mass, lat)
                                         : RotationSpec::from_phi(angle_or(p, "phi", 0.0), mass, lat);
  int cutoff = integer_or(p, "cutoff", 16);
  if (p.contains("potential_file")) {
    std::ifstream f(p.at("potential_file").get<std::string>());
    if (!f) throw ConfigError("key 'potential_file': cannot open file");
    std::vector<std::pair<double, double>> samples;
    double x, v;
    while (f >> x >> v) samples.emplace_back(x, v);
    return ContinuumProblem::from_samples(lat, rot, mass, samples, cutoff);
  }
  double V0 = p.contains("V0_recoil")
                  ? number(p, "V0_recoil") * pi * pi / (2.0 * mass * a * a)
                  : number(p, "V0");
  return ContinuumProblem::sinusoidal(lat, rot, mass, V0, cutoff);
}

void cmd_band(CommandContext& ctx) {
  auto problem = continuum_from(ctx.params);
  auto sol = solve_bloch(problem);
  Metadata meta = base_metadata("band");
  echo_params(meta, ctx.params);
  meta.add("energy_offset", "k_v^2/(2m) subtracted (free-particle convention)");
  for (const auto& d : sol.diagnostics) meta.add("diagnostic", d);
  Table t;
  t.columns = {"n", "K", "omega", "tb_residual"};
  for (const auto& s : sol.band)
    t.add_row({double(s.n), s.K, s.omega, sol.twisted_boundary_residual(s)});
  ctx.emit("bloch_band", meta, t);
}

void cmd_wannier(CommandContext& ctx) {
  auto problem = continuum_from(ctx.params);
  auto sol = solve_bloch(problem);
  auto wan = build_wannier(sol);
  int points = integer_or(ctx.params, "points", 512);

  Metadata meta = base_metadata("wannier");
  echo_params(meta, ctx.params);
  meta.add("orthonormality_residual", wan.orthonormality_residual());
  meta.add("central_fraction", wan.central_fraction());

  Table t;
  t.columns = {"x", "re_W", "im_W", "abs2_W"};
  const double L = problem.lattice.L;
  for (int j = 0; j < points; ++j) {
    double x = -L / 2 + L * j / points;
    auto w = wan.evaluate_W0(x);
    t.add_row({x, w.real(), w.imag(), std::norm(w)});
  }
  ctx.emit("wannier", meta, t);

  auto tun = tunneling_element(wan, problem);
  auto tunH = tunneling_element_harmonic(problem);
  Metadata meta2 = base_metadata("wannier");
  echo_params(meta2, ctx.params);
  meta2.add("construction_0", "truncated Wannier function");
  meta2.add("construction_1", "harmonic ground-state surrogate");
  meta2.add("construction_J_difference", std::abs(tun.J - tunH.J));
  Table t2;
  t2.columns = {"construction", "magnitude", "theta", "magnitude_deviation_vs_phi0"};
  t2.add_row({0.0, tun.magnitude, tun.theta, tun.magnitudeDeviation});
  t2.add_row({1.0, tunH.magnitude, tunH.theta, tunH.magnitudeDeviation});
  ctx.emit("tunneling", meta2, t2);
}

// --- one atom ---------------------------------------------------------------

void cmd_spectrum_sweep(CommandContext& ctx) {
  HubbardParams base{integer(ctx.params, "N"), number_or(ctx.params, "J", 1.0),
                     0.0, 0.0};
  validate(base);
  double lo = number_or(ctx.params, "phi_over_2pi_min", -0.5);
  double hi = number_or(ctx.params, "phi_over_2pi_max", 0.5);
  int points = integer_or(ctx.params, "points", 401);
  if (points < 2) throw ConfigError("key 'points' must be >= 2");

  auto grid = build_momentum_grid(RingLattice::make(base.N), GridKind::Integer);
  Metadata meta = base_metadata("spectrum-sweep");
  echo_params(meta, ctx.params);
  Table t;
  t.columns = {"phi_over_2pi"};
  for (auto q : grid.values()) {
    std::ostringstream c;
    c << "omega_over_J_q_" << format_value(q);
    t.columns.push_back(c.str());
  }

  std::vector<std::vector<double>> rows(points);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < points; ++i) {
    double f = lo + (hi - lo) * i / (points - 1);
    HubbardParams p = base;
    p.phi = 2 * pi * f;
    std::vector<double> row{f};
    for (auto& [q, w] : dispersion_spectrum(p)) row.push_back(w / p.J);
    rows[i] = std::move(row);
  }
  for (auto& r : rows) t.add_row(r);
  ctx.emit("spectrum_sweep", meta, t);
}

void cmd_ground_state(CommandContext& ctx) {
  HubbardParams p{integer(ctx.params, "N"), number(ctx.params, "J"),
                  angle_or(ctx.params, "phi", 0.0), 0.0};
  auto gs = ground_state_set(p, number_or(ctx.params, "tol", -1.0));
  Metadata meta = base_metadata("ground-state");
  echo_params(meta, ctx.params);
  meta.add("degenerate", gs.degenerate() ? "yes" : "no");
  Table t;
  t.columns = {"q", "energy"};
  for (auto& q : gs.momenta) t.add_row({q.value(), gs.energy});
  ctx.emit("ground_state", meta, t);
}

void cmd_wavepacket(CommandContext& ctx) {
  const json& p = ctx.params;
  HubbardParams hp{integer(p, "N"), number_or(p, "J", 1.0), 0.0, 0.0};
  validate(hp);
  double a = number_or(p, "a", 1.0);
  auto ramp = ramp_from(p);
  int samples = integer_or(p, "samples", 100);
  auto packet = OneParticleState::gaussian_packet(hp.N, number_or(p, "center", hp.N / 2.0),
                                                  number_or(p, "width", 6.0),
                                                  angle_or(p, "q0", 0.0));
  auto traj = evolve_one_particle(packet, hp, ramp, samples);

  Metadata meta = base_metadata("wavepacket");
  echo_params(meta, p);
  if (!ramp_is_adiabatic(ramp, hp.J)) meta.add("warning", "ramp rate exceeds 0.1*J (not adiabatic)");

  Table t;
  t.columns = {"t", "phi", "centroid", "norm"};
  double ref = ring_centroid(traj.states.front().to_site());
  std::vector<double> holdT, holdC;
  double Tramp = 0;
  // find where the schedule stops changing (the hold segment)
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i)
    if (std::abs(ramp.phiOfT(traj.times[i + 1]) - ramp.phiOfT(traj.times[i])) > 1e-15)
      Tramp = traj.times[i + 1];
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    double c = ring_centroid(traj.states[i].to_site(), ref);
    ref = c;
    t.add_row({traj.times[i], ramp.phiOfT(traj.times[i]), c, traj.states[i].norm()});
    if (traj.times[i] >= Tramp) {
      holdT.push_back(traj.times[i]);
      holdC.push_back(c);
    }
  }
  if (holdT.size() >= 2) {
    meta.add("fitted_drift_velocity", fit_velocity(holdT, holdC) * a);
    HubbardParams pf = hp;
    pf.phi = ramp.phiOfT(ramp.T);
    meta.add("group_velocity_closed_form", group_velocity(0.0, pf, a));
  }
  ctx.emit("wavepacket", meta, t);

  Table tm;
  tm.columns = {"q", "prob_initial", "prob_final"};
  auto d0 = momentum_distribution(traj.states.front());
  auto d1 = momentum_distribution(traj.states.back());
  for (std::size_t i = 0; i < d0.size(); ++i)
    tm.add_row({d0[i].first, d0[i].second, d1[i].second});
  Metadata meta2 = base_metadata("wavepacket");
  echo_params(meta2, p);
  ctx.emit("wavepacket_momentum", meta2, tm);
}

// --- dimer ------------------------------------------------------------------

double total_momentum_from(const json& p, int N) {
  if (p.contains("P_index")) return 2.0 * pi * integer(p, "P_index") / N;
  return angle(p, "P");
}

void cmd_dimer_solve(CommandContext& ctx) {
  const json& p = ctx.params;
  int N = integer(p, "N");
  double J = number(p, "J"), U = number(p, "U"), phi = angle_or(p, "phi", 0.0);

  std::vector<int> sectors;
  if (p.contains("P") || p.contains("P_index"))
    sectors.push_back(total_momentum_index(N, total_momentum_from(p, N)));
  else
    for (int s = 0; s < N; ++s) sectors.push_back(s);

  std::vector<std::vector<DimerState>> bySector(sectors.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < sectors.size(); ++i)
    bySector[i] = solve_dimer_spectrum(N, 2.0 * pi * sectors[i] / N, phi, J, U);

  Metadata meta = base_metadata("dimer-solve");
  echo_params(meta, p);
  Table t;
  t.columns = {"P", "root_index", "omega", "energy", "Omega", "bound"};
  Table ta;
  ta.columns = {"P", "root_index", "q", "re_A", "im_A"};
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    for (std::size_t r = 0; r < bySector[i].size(); ++r) {
      const auto& st = bySector[i][r];
      t.add_row({st.P, double(r), st.omega, st.energy, st.Omega, st.bound() ? 1.0 : 0.0});
      auto qs = st.grid.values();
      for (std::size_t k = 0; k < qs.size(); ++k)
        ta.add_row({st.P, double(r), qs[k], st.A(k).real(), st.A(k).imag()});
    }
  }
  ctx.emit("dimer_spectrum", meta, t);
  Metadata meta2 = base_metadata("dimer-solve");
  echo_params(meta2, p);
  ctx.emit("dimer_amplitudes", meta2, ta);
}

void cmd_dimer_density(CommandContext& ctx) {
  const json& p = ctx.params;
  double J = number(p, "J"), U = number(p, "U"), phi = angle_or(p, "phi", 0.0);
  double P = angle_or(p, "P", 0.0);
  int points = integer_or(p, "points", 512);

  Metadata meta = base_metadata("dimer-density");
  echo_params(meta, p);
  meta.add("K", dimensionless_coupling(P, phi, J, U));
  Table t;
  t.columns = {"q", "f"};
  for (int i = 0; i < points; ++i) {
    double q = -pi + 2 * pi * i / points;
    t.add_row({q, momentum_density_largeN(q, P, phi, J, U)});
  }
  ctx.emit("dimer_density", meta, t);

  if (p.contains("N")) {
    int N = integer(p, "N");
    auto st = bound_state(N, 2.0 * pi * total_momentum_index(N, P) / N, phi, J, U);
    auto probs = momentum_probabilities_finiteN(st);
    Table tf;
    tf.columns = {"q", "prob", "prob_scaled", "f_closed_form"};
    for (auto& [q, w] : probs)
      tf.add_row({q, w, w * N / (2 * pi), momentum_density_largeN(q, P, phi, J, U)});
    Metadata meta2 = base_metadata("dimer-density");
    echo_params(meta2, p);
    ctx.emit("dimer_density_finiteN", meta2, tf);
  }
}

void cmd_dimer_ramp(CommandContext& ctx) {
  const json& p = ctx.params;
  int N = integer(p, "N");
  double J = number(p, "J"), U = number(p, "U");
  double P = p.contains("P") || p.contains("P_index") ? total_momentum_from(p, N) : 0.0;
  auto ramp = ramp_from(p);
  int samples = integer_or(p, "samples", 200);

  auto initial = bound_state(N, P, ramp.phiOfT(0.0), J, U);
  auto trace = evolve_dimer_ramp(initial, ramp, J, U, samples);

  Metadata meta = base_metadata("dimer-ramp");
  echo_params(meta, p);
  meta.add("norm_drift", trace.normDrift);
  Table t;
  t.columns = {"t", "phi", "fidelity", "rms_size", "peak_q"};
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    t.add_row({trace.times[i], trace.phis[i], trace.fidelities[i], trace.rmsSizes[i],
               trace.peakMomenta[i]});
  ctx.emit("dimer_ramp", meta, t);
}

// --- hetero -----------------------------------------------------------------

HeteroParams hetero_from(const json& p) {
  HeteroParams hp;
  hp.N = integer(p, "N");
  hp.J1 = number(p, "J1");
  hp.J2 = number(p, "J2");
  hp.phi1 = angle_or(p, "phi1", 0.0);
  hp.phi2 = angle_or(p, "phi2", 0.0);
  hp.U12 = number(p, "U12");
  return hp;
}

void cmd_hetero_solve(CommandContext& ctx) {
  const json& p = ctx.params;
  HeteroParams hp = hetero_from(p);

  std::vector<int> sectors;
  if (p.contains("P") || p.contains("P_index"))
    sectors.push_back(total_momentum_index(hp.N, total_momentum_from(p, hp.N)));
  else
    for (int s = 0; s < hp.N; ++s) sectors.push_back(s);

  std::vector<std::vector<HeteroState>> bySector(sectors.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < sectors.size(); ++i)
    bySector[i] = solve_hetero_spectrum(hp, 2.0 * pi * sectors[i] / hp.N);

  Metadata meta = base_metadata("hetero-solve");
  echo_params(meta, p);
  meta.add("inner_product", "plain sum_q A*(q) B(q) (unsymmetrized amplitudes)");
  Table t;
  t.columns = {"P", "root_index", "omega", "energy", "Omega", "beta"};
  Table ta;
  ta.columns = {"P", "root_index", "q", "re_A", "im_A"};
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    for (std::size_t r = 0; r < bySector[i].size(); ++r) {
      const auto& st = bySector[i][r];
      t.add_row({st.P, double(r), st.omega, st.energy, st.Omega, st.beta});
      auto qs = st.grid.values();
      for (std::size_t k = 0; k < qs.size(); ++k)
        ta.add_row({st.P, double(r), qs[k], st.A(k).real(), st.A(k).imag()});
    }
  }
  ctx.emit("hetero_spectrum", meta, t);
  Metadata meta2 = base_metadata("hetero-solve");
  echo_params(meta2, p);
  ctx.emit("hetero_amplitudes", meta2, ta);
}

void cmd_hetero_density(CommandContext& ctx) {
  const json& p = ctx.params;
  HeteroParams hp = hetero_from(p);
  double P = angle_or(p, "P", 0.0);
  int points = integer_or(p, "points", 512);

  Metadata meta = base_metadata("hetero-density");
  echo_params(meta, p);
  Table t;
  t.columns = {"q", "f1", "f2"};
  for (int i = 0; i < points; ++i) {
    double q = -pi + 2 * pi * i / points;
    t.add_row({q, hetero_momentum_density(q, hp, P, 1), hetero_momentum_density(q, hp, P, 2)});
  }
  ctx.emit("hetero_density", meta, t);
}

// --- oracle-check -----------------------------------------------------------

void cmd_oracle_check(CommandContext& ctx) {
  const json& p = ctx.params;
  int Nmin = integer_or(p, "N_min", 3);
  int Nmax = integer_or(p, "N_max", 8);
  int draws = integer_or(p, "draws", 20);
  unsigned seed = unsigned(integer_or(p, "seed", 12345));
  double tolFactor = number_or(p, "tol", 1e-9);
  if (Nmax > 12) throw ConfigError("key 'N_max' exceeds the dense-oracle cap (12)");

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> phiDist(-pi, pi), jDist(0.3, 2.0), uDist(0.5, 5.0);
  auto sign = [&rng]() { return (rng() & 1u) ? 1.0 : -1.0; };

  Metadata meta = base_metadata("oracle-check");
  echo_params(meta, p);
  Table t;
  t.columns = {"kind", "N", "draw", "max_deviation", "tolerance"};
  double worstRel = 0;

  for (int N = Nmin; N <= Nmax; ++N) {
    for (int d = 0; d < draws; ++d) {
      double phi = phiDist(rng), J = sign() * jDist(rng), U = sign() * uDist(rng);
      double tol = tolFactor * std::max(std::abs(J), std::abs(U));
      auto ed = ed_oracle(N, phi, J, U);
      double dev = 0;
      for (int s = 0; s < N; ++s) {
        auto sector = ed.sector_energies(s);
        auto solved = solve_dimer_spectrum(N, 2.0 * pi * s / N, phi, J, U);
        if (sector.size() != solved.size())
          throw std::runtime_error("oracle-check: sector dimension mismatch");
        for (std::size_t k = 0; k < solved.size(); ++k)
          dev = std::max(dev, std::abs(solved[k].energy - sector[k]));
      }
      t.add_row({0.0, double(N), double(d), dev, tol});
      worstRel = std::max(worstRel, dev / tol);

      // heterospecies draw
      HeteroParams hp{N, sign() * jDist(rng), sign() * jDist(rng), phiDist(rng), phiDist(rng),
                      sign() * uDist(rng)};
      double tolH = tolFactor * std::max({std::abs(hp.J1), std::abs(hp.J2), std::abs(hp.U12)});
      auto edh = hetero_ed_oracle(hp);
      double devh = 0;
      for (int s = 0; s < N; ++s) {
        auto sector = edh.sector_energies(s);
        auto solved = solve_hetero_spectrum(hp, 2.0 * pi * s / N);
        if (sector.size() != solved.size())
          throw std::runtime_error("oracle-check: hetero sector dimension mismatch");
        for (std::size_t k = 0; k < solved.size(); ++k)
          devh = std::max(devh, std::abs(solved[k].energy - sector[k]));
      }
      t.add_row({1.0, double(N), double(d), devh, tolH});
      worstRel = std::max(worstRel, devh / tolH);
    }
  }

  meta.add("worst_relative_deviation", worstRel);
  meta.add("status", worstRel <= 1.0 ? "pass" : "fail");
  ctx.emit("oracle_check", meta, t);
  if (worstRel > 1.0)
    throw std::runtime_error("oracle-check: deviation exceeds tolerance (see oracle_check output)");
}

}  // namespace

Scenario load_scenario(const std::string& configPath, const std::string& outDir,
                       const std::string& format, int threads) {
  std::ifstream f(configPath);
  if (!f) throw ConfigError("cannot open config file '" + configPath + "'");
  json cfg;
  try {
    f >> cfg;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  Scenario s;
  // "command" in the config is optional; the CLI subcommand overrides it.
  if (cfg.contains("command")) {
    if (!cfg.at("command").is_string()) throw ConfigError("key 'command' must be a string");
    s.command = cfg.at("command").get<std::string>();
  }
  s.configJson = cfg.value("params", json::object()).dump();
  s.outDir = outDir;
  if (format == "csv")
    s.format = TableFormat::Csv;
  else if (format == "json")
    s.format = TableFormat::Json;
  else
    throw ConfigError("format must be 'csv' or 'json'");
  s.threads = threads;
  return s;
}

std::vector<std::string> run_scenario(const Scenario& scenario) {
#ifdef _OPENMP
  if (scenario.threads > 0) omp_set_num_threads(scenario.threads);
#endif
  CommandContext ctx;
  try {
    ctx.params = json::parse(scenario.configJson);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("params parse error: ") + e.what());
  }
  ctx.outDir = scenario.outDir;
  ctx.format = scenario.format;

  const std::string& c = scenario.command;
  if (c == "band")
    cmd_band(ctx);
  else if (c == "wannier")
    cmd_wannier(ctx);
  else if (c == "spectrum-sweep")
    cmd_spectrum_sweep(ctx);
  else if (c == "ground-state")
    cmd_ground_state(ctx);
  else if (c == "wavepacket")
    cmd_wavepacket(ctx);
  else if (c == "dimer-solve")
    cmd_dimer_solve(ctx);
  else if (c == "dimer-density")
    cmd_dimer_density(ctx);
  else if (c == "dimer-ramp")
    cmd_dimer_ramp(ctx);
  else if (c == "hetero-solve")
    cmd_hetero_solve(ctx);
  else if (c == "hetero-density")
    cmd_hetero_density(ctx);
  else if (c == "oracle-check")
    cmd_oracle_check(ctx);
  else
    throw ConfigError("unknown command '" + c + "'");
  return ctx.written;
}

}  // namespace ringlat

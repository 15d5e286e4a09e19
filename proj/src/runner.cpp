#include "ldg/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace fs = std::filesystem;

namespace ldg {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for '" + key + "': " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("bad boolean value for '" + key + "': " + v);
}

void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "preset") c.preset = value;
  else if (key == "mesh") c.mesh = parse_int(key, value);
  else if (key == "degree") c.degree = parse_int(key, value);
  else if (key == "dirk_order") c.dirk_order = parse_int(key, value);
  else if (key == "alpha") c.alpha = parse_double(key, value);
  else if (key == "tau_max") c.tau_max = parse_double(key, value);
  else if (key == "tau_min") c.tau_min = parse_double(key, value);
  else if (key == "t_final") c.t_final = parse_double(key, value);
  else if (key == "u_min") c.u_min = parse_double(key, value);
  else if (key == "limiter") c.limiter = parse_bool(key, value);
  else if (key == "flux") {
    if (value == "right_q_left_p") c.flux = FluxChoice::RightQLeftP;
    else if (value == "left_q_right_p") c.flux = FluxChoice::LeftQRightP;
    else throw ConfigError("bad flux value: " + value);
  } else if (key == "newton_tol") c.newton_tol = parse_double(key, value);
  else if (key == "newton_max_iter") c.newton_max_iter = parse_int(key, value);
  else if (key == "hard_iteration_limit")
    c.hard_iteration_limit = parse_int(key, value);
  else if (key == "boson_mass") c.boson_mass = parse_double(key, value);
  else if (key == "output_dir") c.output_dir = value;
  else if (key == "seed") c.seed = static_cast<unsigned long>(
      parse_int(key, value));
  else throw ConfigError("unknown config key: " + key);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key=value, got: " + t);
    set_key(c, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  if (c.preset.empty()) throw ConfigError("config is missing 'preset'");
  return c;
}

void apply_override(RunConfig& config, const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must be key=value: " + assignment);
  set_key(config, trim(assignment.substr(0, eq)),
          trim(assignment.substr(eq + 1)));
}

std::string manifest_text(const RunConfig& c) {
  std::ostringstream out;
  out << "preset=" << c.preset << "\n";
  auto opt_i = [&](const char* k, const std::optional<int>& v) {
    if (v) out << k << "=" << *v << "\n";
  };
  auto opt_d = [&](const char* k, const std::optional<double>& v) {
    if (v) out << k << "=" << fmt(*v) << "\n";
  };
  opt_i("mesh", c.mesh);
  opt_i("degree", c.degree);
  opt_i("dirk_order", c.dirk_order);
  opt_d("alpha", c.alpha);
  opt_d("tau_max", c.tau_max);
  opt_d("tau_min", c.tau_min);
  opt_d("t_final", c.t_final);
  opt_d("u_min", c.u_min);
  out << "limiter=" << (c.limiter ? "on" : "off") << "\n";
  out << "flux=" << (c.flux == FluxChoice::RightQLeftP ? "right_q_left_p"
                                                       : "left_q_right_p")
      << "\n";
  out << "newton_tol=" << fmt(c.newton_tol) << "\n";
  out << "newton_max_iter=" << c.newton_max_iter << "\n";
  out << "hard_iteration_limit=" << c.hard_iteration_limit << "\n";
  out << "boson_mass=" << fmt(c.boson_mass) << "\n";
  out << "seed=" << c.seed << "\n";
  return out.str();
}

namespace {

std::string steps_csv(const std::vector<StepRecord>& records) {
  std::ostringstream out;
  out << "# steps v1\n";
  out << "time,tau,entropy,mass,min_u,active_count,max_lambda,"
         "newton_iterations\n";
  for (const auto& r : records)
    out << fmt(r.time) << "," << fmt(r.tau) << "," << fmt(r.entropy) << ","
        << fmt(r.mass) << "," << fmt(r.min_u) << "," << r.active_count << ","
        << fmt(r.max_lambda) << "," << r.newton_iterations << "\n";
  return out.str();
}

std::string state_csv(const Vec& U, int nk) {
  std::ostringstream out;
  out << "# final_state v1\n";
  out << "element,j,coefficient\n";
  for (int i = 0; i < U.size(); ++i)
    out << i / nk << "," << i % nk << "," << fmt(U[i]) << "\n";
  return out.str();
}

double max_at_constraint_points(const Discretization& disc, const Vec& U) {
  const auto& ct = disc.constraint_table();
  int nk = disc.basis().size();
  double m = -std::numeric_limits<double>::infinity();
  for (int e = 0; e < disc.mesh().num_elements(); ++e) {
    Eigen::Map<const Vec> local(U.data() + e * nk, nk);
    m = std::max(m, (ct.values * local).maxCoeff());
  }
  return m;
}

}  // namespace

RunResult run(const RunConfig& config) {
  ExperimentPreset p = preset(config.preset, config.boson_mass);
  if (config.degree) p.degree = *config.degree;
  if (config.dirk_order) p.dirk_order = *config.dirk_order;
  if (config.alpha) p.alpha = *config.alpha;
  if (config.t_final) p.t_final = *config.t_final;
  if (config.u_min) p.spec.u_min = *config.u_min;
  if (config.mesh) {
    p.mesh_counts[0] = *config.mesh;
    p.mesh_counts[1] = p.spec.dim == 2 ? *config.mesh : 1;
  }
  if (p.degree < 0 || p.degree > 6) throw ConfigError("degree out of range");
  if (p.mesh_counts[0] < 1) throw ConfigError("mesh must be positive");
  if (!(p.alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(p.t_final > 0.0)) throw ConfigError("t_final must be positive");

  Mesh mesh = build_mesh(p.spec.dim, p.spec.lower, p.spec.upper, p.mesh_counts,
                         p.spec.boundary);
  Discretization disc(mesh, p.degree);
  OperatorSet ops = assemble_operators(disc, config.flux);
  LdgAssembler assembler(disc, p.spec, ops,
                         config.limiter ? LdgAssembler::Eval::Clipped
                                        : LdgAssembler::Eval::Strict);
  ConstraintSet cs = build_constraints(
      disc, p.spec.u_min,
      std::isfinite(p.spec.admissible_hi) ? p.spec.admissible_hi - p.spec.u_min
                                          : std::numeric_limits<double>::infinity());
  const ConstraintSet* csp = config.limiter ? &cs : nullptr;
  ButcherTableau tab = tableau(p.dirk_order);
  NewtonOptions opts;
  opts.tol = config.newton_tol;
  opts.max_iter = config.newton_max_iter;

  double tau0 = p.alpha * mesh.min_h();
  double tau_max = config.tau_max.value_or(tau0);
  double tau_min = config.tau_min.value_or(tau0 / 1024.0);
  TimeController ctrl(tau0, tau_min, tau_max);

  fs::create_directories(config.output_dir);
  write_file(fs::path(config.output_dir) / "manifest.txt",
             manifest_text(config));

  RunResult res;
  res.min_u_run = std::numeric_limits<double>::infinity();
  auto record = [&](double t, double tau, const Vec& U, int active,
                    double maxlam, int iters) {
    StepRecord r;
    r.time = t;
    r.tau = tau;
    r.entropy = discrete_entropy(assembler, U);
    r.mass = total_mass(assembler, U);
    r.min_u = min_at_constraint_points(disc, U);
    r.active_count = active;
    r.max_lambda = maxlam;
    r.newton_iterations = iters;
    res.records.push_back(r);
    res.max_u.push_back(max_at_constraint_points(disc, U));
    res.min_u_run = std::min(res.min_u_run, r.min_u);
  };

  Vec U;
  try {
    U = project_initial(assembler, csp, opts);
  } catch (const std::exception& e) {
    res.status = RunStatus::SolverFailure;
    res.detail = std::string("initial projection failed: ") + e.what();
    write_file(fs::path(config.output_dir) / "status.txt",
               "status=failed\ndetail=" + res.detail + "\n");
    return res;
  }
  record(0.0, ctrl.tau(), U, 0, 0.0, 0);

  double t = 0.0;
  Vec warm;
  bool have_warm = false;
  while (t < p.t_final - 1e-12 * p.t_final) {
    double tau = std::min(ctrl.tau(), p.t_final - t);
    StepResult sr;
    try {
      sr = advance_step(assembler, csp, U, t, tau, tab, opts,
                        have_warm ? &warm : nullptr,
                        config.hard_iteration_limit);
    } catch (const StepRejected&) {
      if (!ctrl.on_reject()) {
        res.status =
            config.limiter ? RunStatus::SolverFailure : RunStatus::Breakdown;
        res.detail = "time step underflow at t=" + fmt(t);
        break;
      }
      continue;
    }
    if (!sr.U.allFinite()) {
      res.status = RunStatus::Breakdown;
      res.detail = "non-finite state at t=" + fmt(t + tau);
      break;
    }
    if (sr.U.cwiseAbs().maxCoeff() > 1e6) {
      res.status = RunStatus::Breakdown;
      res.detail = "state magnitude exceeded 1e6 at t=" + fmt(t + tau);
      break;
    }
    res.final_rate = (sr.U - U).lpNorm<Eigen::Infinity>() / tau;
    U = sr.U;
    t += tau;
    record(t, tau, U, sr.active_count, sr.max_lambda, sr.newton_total);
    warm = sr.lambda;
    have_warm = warm.size() > 0;
    ctrl.on_accept();
  }
  res.U_final = U;

  if (res.status == RunStatus::Ok && p.spec.has_exact())
    res.errors = error_norms(assembler, U, t);

  std::ostringstream status;
  switch (res.status) {
    case RunStatus::Ok: status << "status=ok\n"; break;
    case RunStatus::Breakdown: status << "status=breakdown\n"; break;
    case RunStatus::SolverFailure: status << "status=failed\n"; break;
  }
  if (!res.detail.empty()) status << "detail=" << res.detail << "\n";
  bool proven = p.dirk_order == 1 && p.spec.boundary != BoundaryKind::Dirichlet;
  status << "entropy_regime=" << (proven ? "proven" : "unproven") << "\n";
  if (res.errors) {
    status << "linf=" << fmt(res.errors->linf) << "\n";
    status << "l1=" << fmt(res.errors->l1) << "\n";
    status << "l2=" << fmt(res.errors->l2) << "\n";
  }
  write_file(fs::path(config.output_dir) / "status.txt", status.str());
  write_file(fs::path(config.output_dir) / "steps.csv", steps_csv(res.records));
  write_file(fs::path(config.output_dir) / "final_state.csv",
             state_csv(U, disc.basis().size()));
  return res;
}

std::vector<ConvergenceRow> run_table(const RunConfig& base,
                                      const std::vector<int>& meshes) {
  if (meshes.empty()) throw ConfigError("empty mesh list");
  std::vector<ErrorNorms> errors;
  std::vector<double> min_u;
  for (int m : meshes) {
    RunConfig c = base;
    c.mesh = m;
    c.output_dir =
        (fs::path(base.output_dir) / ("M" + std::to_string(m))).string();
    RunResult r = run(c);
    if (r.status != RunStatus::Ok)
      throw ConfigError("table run at M=" + std::to_string(m) +
                        " did not complete: " + r.detail);
    if (!r.errors)
      throw ConfigError("table mode requires a model with an exact solution");
    errors.push_back(*r.errors);
    min_u.push_back(r.min_u_run);
  }
  auto rows = convergence_table(meshes, errors, min_u);
  std::ostringstream out;
  out << "# table v1\n";
  out << "M,linf,linf_order,l1,l1_order,min_u\n";
  for (const auto& r : rows)
    out << r.elements << "," << fmt(r.linf) << "," << fmt(r.linf_order) << ","
        << fmt(r.l1) << "," << fmt(r.l1_order) << "," << fmt(r.min_u) << "\n";
  fs::create_directories(base.output_dir);
  write_file(fs::path(base.output_dir) / "table.csv", out.str());
  return rows;
}

namespace {

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  Csv csv;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (csv.columns.empty()) {
      csv.columns = cells;
      continue;
    }
    std::vector<double> row;
    for (const auto& cstr : cells) row.push_back(parse_double("csv", cstr));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

std::map<std::string, std::string> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq != std::string::npos)
      kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

}  // namespace

double CompareReport::max_delta() const {
  double m = final_state_delta;
  for (double d : deltas) m = std::max(m, d);
  return m;
}

std::string CompareReport::format() const {
  std::ostringstream out;
  out << "rows: " << rows_a << " vs " << rows_b << "\n";
  for (size_t i = 0; i < columns.size(); ++i)
    out << columns[i] << ": max delta " << fmt(deltas[i]) << "\n";
  out << "final_state: max delta " << fmt(final_state_delta) << "\n";
  return out.str();
}

CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b) {
  auto ma = read_manifest(fs::path(dir_a) / "manifest.txt");
  auto mb = read_manifest(fs::path(dir_b) / "manifest.txt");
  for (const char* key : {"preset", "mesh", "degree"}) {
    auto ia = ma.find(key), ib = mb.find(key);
    std::string va = ia == ma.end() ? "" : ia->second;
    std::string vb = ib == mb.end() ? "" : ib->second;
    if (va != vb)
      throw ConfigError(std::string("incompatible runs: ") + key + " '" + va +
                        "' vs '" + vb + "'");
  }

  Csv a = read_csv(fs::path(dir_a) / "steps.csv");
  Csv b = read_csv(fs::path(dir_b) / "steps.csv");
  if (a.columns != b.columns)
    throw ConfigError("incompatible runs: steps.csv columns differ");

  CompareReport rep;
  rep.columns = a.columns;
  rep.deltas.assign(a.columns.size(), 0.0);
  rep.rows_a = static_cast<long>(a.rows.size());
  rep.rows_b = static_cast<long>(b.rows.size());
  size_t common = std::min(a.rows.size(), b.rows.size());
  for (size_t r = 0; r < common; ++r)
    for (size_t c = 0; c < rep.deltas.size(); ++c)
      rep.deltas[c] =
          std::max(rep.deltas[c], std::abs(a.rows[r][c] - b.rows[r][c]));
  if (a.rows.size() != b.rows.size())
    for (auto& d : rep.deltas) d = std::numeric_limits<double>::infinity();

  Csv fa = read_csv(fs::path(dir_a) / "final_state.csv");
  Csv fb = read_csv(fs::path(dir_b) / "final_state.csv");
  if (fa.rows.size() != fb.rows.size())
    throw ConfigError("incompatible runs: final state sizes differ");
  for (size_t r = 0; r < fa.rows.size(); ++r)
    rep.final_state_delta = std::max(
        rep.final_state_delta, std::abs(fa.rows[r].back() - fb.rows[r].back()));
  return rep;
}

}  // namespace ldg

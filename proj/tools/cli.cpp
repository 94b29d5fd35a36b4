#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "compacton/error.hpp"
#include "compacton/evolution.hpp"
#include "compacton/functionals.hpp"
#include "compacton/linearized_flow.hpp"
#include "compacton/profile_io.hpp"
#include "compacton/profiles.hpp"
#include "compacton/spectral.hpp"

#ifndef COMPACTON_VERSION
#define COMPACTON_VERSION "unknown"
#endif

namespace compacton::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double env_tolerance(const char* name, double fallback) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return fallback;
  double value = 0.0;
  if (!parse_double(raw, value) || !(value > 0.0) || !std::isfinite(value))
    throw InvalidInput(std::string(name) + " must be a positive number, got '" + raw + "'");
  return value;
}

fs::path resolve(const Context& ctx, const std::string& p) {
  fs::path q(p);
  if (q.is_relative()) q = ctx.out_dir / q;
  if (q.has_parent_path()) fs::create_directories(q.parent_path());
  return q;
}

json versions() {
  return {{"compacton", COMPACTON_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)}};
}

struct RunManifest {
  std::string command;
  json parameters = json::object();
  std::vector<std::string> artifacts;
  double wall_seconds = 0.0;
  int exit_status = 0;
  json extra = json::object();
};

void write_run_manifest(const fs::path& path, const RunManifest& m) {
  json j = {{"command", m.command},   {"parameters", m.parameters},     {"artifacts", m.artifacts},
            {"versions", versions()}, {"wall_seconds", m.wall_seconds}, {"exit_status", m.exit_status}};
  for (auto it = m.extra.begin(); it != m.extra.end(); ++it) j[it.key()] = it.value();
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
}

fs::path run_manifest_path(const fs::path& artifact) {
  fs::path p = artifact;
  p.replace_extension(".run.json");
  return p;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void emit(const Context& ctx, const std::string& text, const std::string& out_path, RunManifest& m) {
  if (out_path.empty()) {
    *ctx.out << text << '\n';
    return;
  }
  const fs::path path = resolve(ctx, out_path);
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  f << text << '\n';
  m.artifacts.push_back(path.string());
}

// ---- profile -------------------------------------------------------------

struct ProfileArgs {
  double p = 4.0, A = 0.0, B = 0.0, c = 1.0;
  std::optional<double> v;
  std::size_t n = 2048;
  std::string out = "profile.csv";
};

std::string violated_condition(const ModelParams& mp, const std::string& what) {
  std::string msg = "invalid parameters (p=" + format_double(mp.p) + ", A=" + format_double(mp.A) +
                    ", B=" + format_double(mp.B) + ", c=" + format_double(mp.c) + "): " + what;
  if (mp.A == 0.0 && !(mp.B > 0.0) && !(mp.c > 0.0))
    msg += "; with A = 0 a compacton needs B > 0 or c > 0";
  return msg;
}

int cmd_profile(const ProfileArgs& a, const Context& ctx) {
  const auto start = Clock::now();
  const ModelParams mp{a.p, a.A, a.B, a.c};
  RunManifest rm;
  rm.command = "profile";
  rm.parameters = {{"p", a.p}, {"A", a.A}, {"B", a.B}, {"c", a.c}, {"n", a.n}};
  if (a.v) rm.parameters["v"] = *a.v;

  SolutionKind kind = SolutionKind::Compacton;
  std::string label = "Compacton";
  if (a.p != 2.0) {
    SolutionClass cls;
    try {
      cls = classify(mp);
    } catch (const InvalidInput& e) {
      throw InvalidInput(violated_condition(mp, e.what()));
    }
    kind = cls.tag;
    label = to_string(cls.tag);
    if (cls.edge_case) label += " (" + to_string(*cls.edge_case) + ")";
  }

  const fs::path csv = resolve(ctx, a.out);
  *ctx.out << "classification: " << label << '\n';
  switch (kind) {
    case SolutionKind::Compacton: {
      if (a.v) {
        if (a.A != 0.0) throw InvalidInput("--v requires A = 0");
        const auto q = build_nls_compacton(mp, *a.v, a.n);
        write_nls_csv(csv, q);
        *ctx.out << "half_width: " << format_double(q.base.half_width) << '\n';
      } else {
        const auto prof = a.A == 0.0 ? build_compacton(mp, a.n) : build_compacton_quadrature(mp, a.n);
        write_profile_csv(csv, prof);
        *ctx.out << "half_width: " << format_double(prof.half_width) << '\n';
      }
      break;
    }
    case SolutionKind::Periodic: {
      if (a.v) throw InvalidInput("--v applies to compactons only");
      const auto prof = build_periodic(mp, a.n);
      write_periodic_csv(csv, prof);
      *ctx.out << "period: " << format_double(prof.period) << '\n';
      break;
    }
    case SolutionKind::Front:
      *ctx.out << "front: no profile written\n";
      rm.wall_seconds = seconds_since(start);
      write_run_manifest(run_manifest_path(csv), rm);
      return kExitOk;
  }
  rm.artifacts = {csv.string(), manifest_path(csv).string()};
  rm.wall_seconds = seconds_since(start);
  write_run_manifest(run_manifest_path(csv), rm);
  return kExitOk;
}

// ---- functionals ---------------------------------------------------------

struct FunctionalsArgs {
  std::string in;
  double p = 4.0, A = 0.0, B = 0.0, c = 1.0;
  std::size_t n = 4096;
  std::string out;
};

int cmd_functionals(const FunctionalsArgs& a, const Context& ctx) {
  const auto start = Clock::now();
  RunManifest rm;
  rm.command = "functionals";
  CompactonProfile prof;
  if (!a.in.empty()) {
    rm.parameters = {{"in", a.in}};
    prof = read_profile(fs::path(a.in).is_relative() ? ctx.out_dir / a.in : fs::path(a.in));
  } else {
    const ModelParams mp{a.p, a.A, a.B, a.c};
    rm.parameters = {{"p", a.p}, {"A", a.A}, {"B", a.B}, {"c", a.c}, {"n", a.n}};
    prof = a.A == 0.0 ? build_compacton(mp, a.n) : build_compacton_quadrature(mp, a.n);
  }
  emit(ctx, to_json(functional_report(prof)), a.out, rm);
  if (!a.out.empty()) {
    rm.wall_seconds = seconds_since(start);
    write_run_manifest(run_manifest_path(resolve(ctx, a.out)), rm);
  }
  return kExitOk;
}

// ---- minimize ------------------------------------------------------------

struct MinimizeArgs {
  double p = 4.0;
  double mass = 1.0;
  std::string out;
};

int cmd_minimize(const MinimizeArgs& a, const Context& ctx) {
  const auto start = Clock::now();
  if (!(a.p > 2.0 && a.p < 8.0))
    throw InvalidInput("p = " + format_double(a.p) +
                       " is outside (2, 8); for p >= 8 minimizing sequences lose compactness");
  RunManifest rm;
  rm.command = "minimize";
  rm.parameters = {{"p", a.p}, {"mass", a.mass}};
  emit(ctx, to_json(minimize_in_family(a.p, a.mass)), a.out, rm);
  if (!a.out.empty()) {
    rm.wall_seconds = seconds_since(start);
    write_run_manifest(run_manifest_path(resolve(ctx, a.out)), rm);
  }
  return kExitOk;
}

// ---- spectrum ------------------------------------------------------------

struct SpectrumArgs {
  std::string case_name;
  std::string method = "green";
  int k = 2;
  std::size_t n = 0;
  double T = 12.0;
  std::string out;
};

int cmd_spectrum(const SpectrumArgs& a, const Context& ctx) {
  const auto start = Clock::now();
  const CaseTag tag = parse_case(a.case_name);
  if (a.k < 1) throw InvalidInput("--k must be at least 1");
  Spectrum s;
  if (a.method == "b") {
    if (tag != CaseTag::B0c1) throw InvalidInput("method b (Liouville transform) is defined for B0c1 only");
    s = eig_b(b_transform(a.T, a.n ? a.n : 4096), a.k);
  } else if (a.method == "green") {
    s = eig_green(tag, a.n ? a.n : 1024, a.k);
  } else if (a.method == "direct") {
    s = eig_direct(LinearizedOperator(tag, a.n ? a.n : 4096), a.k);
  } else {
    throw InvalidInput("unknown method '" + a.method + "' (expected b, green or direct)");
  }
  RunManifest rm;
  rm.command = "spectrum";
  rm.parameters = {{"case", a.case_name}, {"method", a.method}, {"k", a.k}, {"n", s.grid_n}};
  emit(ctx, to_json(s), a.out, rm);
  if (!a.out.empty()) {
    rm.wall_seconds = seconds_since(start);
    write_run_manifest(run_manifest_path(resolve(ctx, a.out)), rm);
  }
  return kExitOk;
}

// ---- evolve --------------------------------------------------------------

struct EvolveArgs {
  std::string model;
  std::string ic;
  double p = 4.0;
  double nu = 1e-4;
  double T = 1.0;
  std::optional<double> rtol, atol;
  std::optional<double> L;
  std::size_t n = 0;
  int snapshots = 3;
  int samples = 101;
  bool dealias = false;
  std::string case_name = "B14c1";
  double dt = 0.0;
  int max_steps = 1000000;
  std::string out_prefix = "run";
};

struct IcSpec {
  std::string kind;
  std::map<std::string, double> values;
  double get(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
};

// "kind[:key=value,...]"
IcSpec parse_ic(const std::string& text, const std::vector<std::string>& allowed) {
  IcSpec spec;
  const auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  if (colon == std::string::npos) return spec;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidInput("--ic: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InvalidInput("--ic: unknown key '" + key + "' for " + spec.kind);
    double value = 0.0;
    if (!parse_double(item.substr(eq + 1), value)) throw InvalidInput("--ic: bad number in '" + item + "'");
    spec.values[key] = value;
  }
  return spec;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out;
  if (count == 1) return {b};
  for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * i / (count - 1));
  return out;
}

std::string snapshot_name(const std::string& prefix, std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", k);
  return prefix + "_snap_" + buf + ".csv";
}

int evolve_linear(const EvolveArgs& a, const Context& ctx, RunManifest& rm, Clock::time_point start) {
  const IcSpec ic = parse_ic(a.ic.empty() ? "random" : a.ic, {"seed", "modes"});
  if (ic.kind != "random") throw InvalidInput("model linear takes --ic random[:seed=..,modes=..]");
  const CaseTag tag = parse_case(a.case_name);
  const std::size_t n = a.n ? a.n : 512;
  const LinearizedOperator op(tag, n);
  const auto seed = static_cast<unsigned>(ic.get("seed", 1));
  const auto v0 = random_constrained_data(op, seed, static_cast<int>(ic.get("modes", 6)));
  FlowOptions opt;
  opt.t_end = a.T;
  opt.dt = a.dt;
  const FlowResult res = evolve_linearized(op, v0, {}, opt);

  const fs::path traj = resolve(ctx, a.out_prefix + "_trajectory.csv");
  write_trajectory_csv(traj.string(), res);
  const fs::path fin = resolve(ctx, a.out_prefix + "_final.csv");
  {
    std::ofstream f(fin);
    if (!f) throw InvalidInput("cannot open '" + fin.string() + "' for writing");
    f << "x,v\n";
    for (std::size_t i = 0; i < n; ++i) f << format_double(op.xs()[i]) << ',' << format_double(res.v_final[i]) << '\n';
  }
  rm.artifacts = {traj.string(), fin.string()};
  rm.parameters["case"] = to_string(tag);
  rm.parameters["seed"] = seed;
  rm.extra["grid"] = {{"n", n}, {"x_r", op.x_r()}};
  rm.extra["steps"] = res.steps;
  rm.extra["max_energy_increase"] = res.max_energy_increase;
  rm.wall_seconds = seconds_since(start);
  write_run_manifest(resolve(ctx, a.out_prefix + ".manifest.json"), rm);
  *ctx.out << "steps: " << res.steps << "\nenergy: " << format_double(res.samples.front().energy_H) << " -> "
           << format_double(res.samples.back().energy_H) << '\n';
  return kExitOk;
}

int cmd_evolve(const EvolveArgs& a, const Context& ctx) {
  const auto start = Clock::now();
  RunManifest rm;
  rm.command = "evolve";
  const double rtol = a.rtol ? *a.rtol : default_rtol();
  const double atol = a.atol ? *a.atol : default_atol();
  if (!(rtol > 0.0) || !(atol > 0.0)) throw InvalidInput("--rtol and --atol must be positive");
  if (!(a.T > 0.0) || !std::isfinite(a.T)) throw InvalidInput("--T must be positive");
  if (a.snapshots < 1 || a.samples < 2) throw InvalidInput("--snapshots >= 1 and --samples >= 2 required");
  rm.parameters = {{"model", a.model}, {"ic", a.ic}, {"p", a.p}, {"nu", a.nu}, {"T", a.T},
                   {"rtol", rtol},     {"atol", atol}};
  if (a.model == "linear") return evolve_linear(a, ctx, rm, start);

  const Model model = parse_model(a.model);
  const std::vector<std::string> keys = {"p", "B", "c", "x0", "amplitude", "width", "drift"};
  IcSpec ic;
  double L = 40.0;
  std::size_t n = 2048;
  InitialKind kind = InitialKind::Compacton;
  switch (model) {
    case Model::DKdV:
      ic = parse_ic(a.ic.empty() ? "compacton" : a.ic, keys);
      if (ic.kind == "compacton") kind = InitialKind::Compacton;
      else if (ic.kind == "perturbed") kind = InitialKind::PerturbedCompacton;
      else throw InvalidInput("model dkdv takes --ic compacton or perturbed");
      break;
    case Model::DNLS:
      ic = parse_ic(a.ic.empty() ? "periodic:B=-0.2,c=1" : a.ic, keys);
      if (ic.kind != "periodic") throw InvalidInput("model dnls takes --ic periodic");
      kind = InitialKind::Periodic;
      n = 512;
      break;
    case Model::Hydro:
      ic = parse_ic(a.ic.empty() ? "gaussian" : a.ic, keys);
      if (ic.kind == "gaussian" || ic.kind == "gaussian+const") kind = InitialKind::Gaussian;
      else if (ic.kind != "cosine") throw InvalidInput("model hydro takes --ic gaussian, gaussian+const or cosine");
      n = 1024;
      break;
  }
  InitialParams ip;
  ip.p = ic.get("p", a.p);
  ip.B = ic.get("B", model == Model::DNLS ? -0.2 : 0.0);
  ip.c = ic.get("c", 1.0);
  ip.x0 = ic.get("x0", 0.0);
  ip.amplitude = ic.get("amplitude", ic.kind == "cosine" ? 0.5 : 1.0);
  ip.width = ic.get("width", 2.0);
  ip.drift = ic.get("drift", 1.0);
  if (model == Model::DNLS) L = build_periodic({ip.p, 0.0, ip.B, ip.c}, 64).period;
  if (ic.kind == "cosine") L = 8.0 * std::numbers::sqrt2 * std::numbers::pi;
  if (a.L) L = *a.L;
  if (a.n) n = a.n;
  const PeriodicGrid grid(L, n);

  FieldState init;
  if (ic.kind == "cosine") {
    // rho = c + amplitude cos(sqrt2 (x - x0)), u = 0
    init.kind = Model::Hydro;
    init.rho.resize(n);
    init.u.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      init.rho[i] = ip.c + ip.amplitude * std::cos(std::numbers::sqrt2 * (grid.xs()[i] - ip.x0));
  } else {
    init = initial_condition(kind, ip, grid);
  }

  EvolutionConfig cfg;
  cfg.p = ip.p;
  cfg.nu = a.nu;
  cfg.dealias = a.dealias;
  cfg.integrator.rtol = rtol;
  cfg.integrator.atol = atol;
  cfg.integrator.max_steps = a.max_steps;
  const auto snap_times = linspace(0.0, a.T, a.snapshots);
  cfg.times = linspace(0.0, a.T, a.samples);
  cfg.times.insert(cfg.times.end(), snap_times.begin(), snap_times.end());
  std::sort(cfg.times.begin(), cfg.times.end());
  cfg.times.erase(std::unique(cfg.times.begin(), cfg.times.end(),
                              [&](double x, double y) { return std::abs(x - y) <= 1e-12 * a.T; }),
                  cfg.times.end());

  rm.parameters["L"] = L;
  rm.parameters["n"] = n;
  rm.parameters["dealias"] = a.dealias;
  rm.extra["model"] = to_string(model);
  rm.extra["grid"] = {{"L", L}, {"n", n}, {"dx", grid.dx()}};
  rm.extra["nu"] = a.nu;
  rm.extra["tolerances"] = {{"rtol", rtol}, {"atol", atol}};
  const fs::path manifest = resolve(ctx, a.out_prefix + ".manifest.json");

  EvolutionResult res;
  try {
    res = evolve(init, grid, cfg);
  } catch (const IntegrationFailure& e) {
    FieldState last;
    last.kind = model;
    last.t = e.t_last;
    const auto& y = e.y_last;
    switch (model) {
      case Model::DKdV: last.u.assign(y.data(), y.data() + n); break;
      case Model::DNLS:
        for (std::size_t i = 0; i < n; ++i) last.v.emplace_back(y[2 * i], y[2 * i + 1]);
        break;
      case Model::Hydro:
        last.rho.assign(y.data(), y.data() + n);
        last.u.assign(y.data() + n, y.data() + 2 * n);
        break;
    }
    const fs::path lp = resolve(ctx, a.out_prefix + "_last.csv");
    write_snapshot_csv(lp.string(), last, grid);
    rm.artifacts = {lp.string()};
    rm.exit_status = kExitFailure;
    rm.extra["last_good_time"] = e.t_last;
    rm.extra["error"] = e.what();
    rm.wall_seconds = seconds_since(start);
    write_run_manifest(manifest, rm);
    *ctx.err << "integration failed at t = " << format_double(e.t_last) << ": " << e.what() << '\n';
    return kExitFailure;
  }

  const fs::path series = resolve(ctx, a.out_prefix + "_series.csv");
  write_series_csv(series.string(), res.series);
  rm.artifacts.push_back(series.string());
  json snaps = json::array();
  std::size_t k = 0;
  for (const auto& s : res.snapshots) {
    const bool wanted = std::any_of(snap_times.begin(), snap_times.end(),
                                    [&](double t) { return std::abs(t - s.t) <= 1e-12 * a.T; });
    if (!wanted) continue;
    const fs::path sp = resolve(ctx, snapshot_name(a.out_prefix, k++));
    write_snapshot_csv(sp.string(), s, grid);
    rm.artifacts.push_back(sp.string());
    snaps.push_back({{"t", s.t}, {"path", sp.string()}});
  }
  rm.extra["snapshots"] = snaps;
  rm.extra["rho_floor_incidents"] = res.rho_floor_incidents;
  rm.extra["integrator"] = {{"accepted", res.stats.accepted},
                            {"rejected", res.stats.rejected},
                            {"rhs_evaluations", res.stats.rhs_evaluations},
                            {"jacobians", res.stats.jacobians},
                            {"linear_iterations", res.stats.linear_iterations}};
  rm.wall_seconds = seconds_since(start);
  rm.extra["evolve_seconds"] = res.wall_seconds;
  write_run_manifest(manifest, rm);

  const auto& first = res.series.front();
  const auto& last = res.series.back();
  *ctx.out << "steps: " << res.stats.accepted << " accepted, " << res.stats.rejected << " rejected\n"
           << "mass drift: " << format_double(std::abs(last.mass - first.mass) / std::abs(first.mass)) << '\n'
           << "hamiltonian drift: "
           << format_double(std::abs(last.hamiltonian - first.hamiltonian) / std::abs(first.hamiltonian)) << '\n';
  return kExitOk;
}

// ---- dispatch ------------------------------------------------------------

std::vector<std::vector<std::string>> read_sweep(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read sweep file '" + path.string() + "'");
  std::vector<std::vector<std::string>> runs;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> args{std::istream_iterator<std::string>(words), {}};
    if (!args.empty()) runs.push_back(std::move(args));
  }
  if (runs.empty()) throw InvalidInput("sweep file '" + path.string() + "' has no runs");
  return runs;
}

// One run per worker thread; run i writes into <out_dir>/run_<i>/ and its
// console output goes to stdout.txt / stderr.txt there.
int run_sweep(const fs::path& file, unsigned jobs, const Context& ctx) {
  const auto runs = read_sweep(file.is_relative() && !fs::exists(file) ? ctx.out_dir / file : file);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(runs.size()));
  std::vector<int> codes(runs.size(), 0);
  std::vector<fs::path> dirs(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "run_%03zu", i);
      dirs[i] = ctx.out_dir / buf;
      fs::create_directories(dirs[i]);
      std::ofstream out(dirs[i] / "stdout.txt"), err(dirs[i] / "stderr.txt");
      codes[i] = run(runs[i], Context{dirs[i], &out, &err});
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  json summary = json::array();
  int worst = kExitOk;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    summary.push_back({{"args", runs[i]}, {"dir", dirs[i].string()}, {"exit_status", codes[i]}});
    worst = std::max(worst, codes[i]);
    *ctx.out << dirs[i].string() << ": exit " << codes[i] << '\n';
  }
  std::ofstream(ctx.out_dir / "sweep.json") << summary.dump(2) << '\n';
  return worst;
}

}  // namespace

double default_rtol() { return env_tolerance("COMPACTON_RTOL", 1e-6); }
double default_atol() { return env_tolerance("COMPACTON_ATOL", 1e-9); }

int run(const std::vector<std::string>& args, const Context& base) {
  Context ctx = base;
  if (!ctx.out) ctx.out = &std::cout;
  if (!ctx.err) ctx.err = &std::cerr;

  CLI::App app{"Compacton profiles, functionals, spectra and evolution runs", "compacton"};
  app.require_subcommand(0, 1);
  std::string sweep;
  unsigned jobs = 0;
  std::string out_dir;
  app.add_option("--sweep", sweep, "File with one command line per run, fanned out across threads");
  app.add_option("--jobs", jobs, "Worker threads for --sweep (0 = hardware concurrency)");
  app.add_option("--out-dir", out_dir, "Directory for relative output paths");

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "Sample a traveling-wave profile to CSV");
  profile->add_option("--p", pa.p, "Nonlinearity exponent");
  profile->add_option("--A", pa.A, "Integration constant A");
  profile->add_option("--B", pa.B, "Integration constant B");
  profile->add_option("--c", pa.c, "Wave speed");
  profile->add_option("--v", pa.v, "NLS phase velocity (adds theta, re, im columns)");
  profile->add_option("--n", pa.n, "Number of samples");
  profile->add_option("--out", pa.out, "Output CSV");

  FunctionalsArgs fa;
  auto* functionals = app.add_subcommand("functionals", "Mass, energy, momenta and identity residuals");
  functionals->add_option("--in", fa.in, "Profile CSV written by `profile`");
  functionals->add_option("--p", fa.p);
  functionals->add_option("--A", fa.A);
  functionals->add_option("--B", fa.B);
  functionals->add_option("--c", fa.c);
  functionals->add_option("--n", fa.n);
  functionals->add_option("--out", fa.out, "Write JSON here instead of stdout");

  MinimizeArgs ma;
  auto* minimize = app.add_subcommand("minimize", "Minimize H over the compacton family at fixed mass");
  minimize->add_option("--p", ma.p)->required();
  minimize->add_option("--mass", ma.mass)->required();
  minimize->add_option("--out", ma.out);

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Low eigenvalues of the linearized operator");
  spectrum->add_option("--case", sa.case_name, "B0c1, B14c1, B14c0 or B14cm1")->required();
  spectrum->add_option("--method", sa.method, "b, green or direct");
  spectrum->add_option("--k", sa.k, "Number of eigenvalues");
  spectrum->add_option("--n", sa.n, "Grid or node count (0 = method default)");
  spectrum->add_option("--T", sa.T, "Truncation of the b-transform line");
  spectrum->add_option("--out", sa.out);

  EvolveArgs ea;
  auto* evolve_cmd = app.add_subcommand("evolve", "Time integration with CSV snapshots and diagnostics");
  evolve_cmd->add_option("--model", ea.model, "dkdv, dnls, hydro or linear")->required();
  evolve_cmd->add_option("--ic", ea.ic, "kind[:key=value,...]");
  evolve_cmd->add_option("--p", ea.p);
  evolve_cmd->add_option("--nu", ea.nu, "Regularization of the derivative multiplier");
  evolve_cmd->add_option("--T", ea.T, "Final time");
  evolve_cmd->add_option("--rtol", ea.rtol);
  evolve_cmd->add_option("--atol", ea.atol);
  evolve_cmd->add_option("--L", ea.L, "Periodic box length");
  evolve_cmd->add_option("--n", ea.n, "Grid points");
  evolve_cmd->add_option("--snapshots", ea.snapshots, "Evenly spaced snapshot count including t = 0");
  evolve_cmd->add_option("--samples", ea.samples, "Diagnostic sample count including t = 0");
  evolve_cmd->add_flag("--dealias", ea.dealias, "Apply the 2/3 rule to the right-hand side");
  evolve_cmd->add_option("--case", ea.case_name, "Linearized case for --model linear");
  evolve_cmd->add_option("--dt", ea.dt, "Step for --model linear (0 = default)");
  evolve_cmd->add_option("--max-steps", ea.max_steps, "Integrator step budget");
  evolve_cmd->add_option("--out-prefix", ea.out_prefix);

  std::vector<std::string> argv_s{"compacton"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_s) argv.push_back(s.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      *ctx.out << app.help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      *ctx.err << "error: " << e.what() << '\n';
      return kExitInvalid;
    }
    if (!out_dir.empty()) {
      ctx.out_dir = out_dir;
      fs::create_directories(ctx.out_dir);
    }
    if (!sweep.empty()) return run_sweep(sweep, jobs, ctx);
    if (*profile) return cmd_profile(pa, ctx);
    if (*functionals) return cmd_functionals(fa, ctx);
    if (*minimize) return cmd_minimize(ma, ctx);
    if (*spectrum) return cmd_spectrum(sa, ctx);
    if (*evolve_cmd) return cmd_evolve(ea, ctx);
    *ctx.err << "error: no command given\n" << app.help();
    return kExitInvalid;
  } catch (const InvalidInput& e) {
    *ctx.err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    *ctx.err << "failure: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace compacton::cli

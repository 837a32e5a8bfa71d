// orbitflow: configuration-driven runner for hierarchy flows, curve flows,
// soliton generation, development-map transforms, finite type solutions, and
// the verification suite.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure,
// 4 verification failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>

#include "orbitflow/config.hpp"
#include "orbitflow/devmap.hpp"
#include "orbitflow/fixtures.hpp"
#include "orbitflow/solitons.hpp"
#include "orbitflow/symspace.hpp"
#include "orbitflow/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace orbitflow;

namespace {

struct CliArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::vector<std::string> overrides;
};

RunConfig load_config(const CliArgs& args) {
  RunConfig cfg = args.config_path.empty() ? RunConfig::from_string("")
                                           : RunConfig::from_file(args.config_path);
  for (const auto& o : args.overrides) cfg.apply_override(o);
  return cfg;
}

std::string out_path(const CliArgs& args, const RunConfig& cfg, const std::string& suffix) {
  fs::create_directories(args.out_dir);
  return (fs::path(args.out_dir) / (cfg.get_str("out.prefix", "run") + suffix)).string();
}

// -- domain objects from config ---------------------------------------------------

AlgebraElement parse_element(const RunConfig& cfg, const std::string& key,
                             const AlgebraTag& tag, const AlgebraElement& fallback) {
  std::string spec = cfg.get_str(key, "default");
  if (spec == "default" || spec == "a") return fallback;
  if (spec.rfind("diag:", 0) == 0) {
    std::vector<double> d = parse_double_list(spec.substr(5));
    if (static_cast<int>(d.size()) != tag.matrix_dim())
      throw ConfigError(key + ": diag needs " + std::to_string(tag.matrix_dim()) + " entries");
    Mat m = Mat::Zero(tag.matrix_dim(), tag.matrix_dim());
    for (int i = 0; i < tag.matrix_dim(); ++i) m(i, i) = Complex(0, d[i]);
    AlgebraElement e{tag, m};
    check_algebra(e);
    return e;
  }
  if (spec.rfind("mat:", 0) == 0) {
    std::vector<double> d = parse_double_list(spec.substr(4));
    const int n = tag.matrix_dim();
    if (static_cast<int>(d.size()) != 2 * n * n)
      throw ConfigError(key + ": mat needs " + std::to_string(2 * n * n) +
                        " numbers (row-major re,im pairs)");
    Mat m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) = Complex(d[2 * (r * n + c)], d[2 * (r * n + c) + 1]);
    AlgebraElement e{tag, m};
    check_algebra(e);
    return e;
  }
  throw ConfigError(key + ": expected default | a | diag:... | mat:...");
}

struct SpaceSetup {
  HierarchyContext ctx;
  std::optional<SymmetricSpaceSpec> space;  // set for catalog entries
};

SpaceSetup build_setup(const RunConfig& cfg) {
  const std::string space = cfg.get_str("space", "su2");
  const int j = cfg.get_int("j", 2);
  auto with_catalog = [&](SpaceId id, int n, int k) {
    SymmetricSpaceSpec spec = catalog(id, n, k);
    AlgebraElement a = parse_element(cfg, "a", spec.tag, spec.a);
    AlgebraElement b = parse_element(cfg, "b", spec.tag, a);
    return SpaceSetup{HierarchyContext(a, b, j), spec};
  };
  if (space == "su2") {
    AlgebraElement a = parse_element(cfg, "a", AlgebraTag{Family::su, 2}, fixtures::su2_a());
    AlgebraElement b = parse_element(cfg, "b", a.tag, a);
    return {HierarchyContext(a, b, j), std::nullopt};
  }
  if (space == "u3") {
    AlgebraElement a =
        parse_element(cfg, "a", AlgebraTag{Family::u, 3}, fixtures::un_diag({1.0, 2.0, 3.0}));
    AlgebraElement b = parse_element(cfg, "b", a.tag, a);
    return {HierarchyContext(a, b, j), std::nullopt};
  }
  auto parse_sizes = [&](const std::string& rest, int expected) {
    std::vector<double> v = parse_double_list(rest);
    if (static_cast<int>(v.size()) != expected)
      throw ConfigError("space " + space + ": wrong parameter count");
    return v;
  };
  if (space.rfind("gr:", 0) == 0) {
    auto v = parse_sizes(space.substr(3), 2);
    return with_catalog(SpaceId::gr_complex, static_cast<int>(v[1]), static_cast<int>(v[0]));
  }
  if (space.rfind("sphere:", 0) == 0) {
    auto v = parse_sizes(space.substr(7), 1);
    return with_catalog(SpaceId::sphere, static_cast<int>(v[0]), 1);
  }
  if (space.rfind("gr2:", 0) == 0) {
    auto v = parse_sizes(space.substr(4), 1);
    return with_catalog(SpaceId::gr2_real, static_cast<int>(v[0]), 1);
  }
  if (space.rfind("so2n:", 0) == 0) {
    auto v = parse_sizes(space.substr(5), 1);
    return with_catalog(SpaceId::so2n_un, static_cast<int>(v[0]), 1);
  }
  if (space.rfind("spn:", 0) == 0) {
    auto v = parse_sizes(space.substr(4), 1);
    return with_catalog(SpaceId::spn_un, static_cast<int>(v[0]), 1);
  }
  throw ConfigError("unknown space: " + space +
                    " (expected su2 | u3 | gr:k,n | sphere:n | gr2:n | so2n:n | spn:n)");
}

LineGrid build_grid(const RunConfig& cfg) {
  LineGrid g{cfg.get_double("grid.L", 20.0), cfg.get_int("grid.N", 1024)};
  check_grid(g);
  return g;
}

Field read_jsonl_field(const std::string& path, const LineGrid& g, const AlgebraTag& tag);

Field build_initial_field(const RunConfig& cfg, const CliArgs& args,
                          const HierarchyContext& ctx, const LineGrid& g) {
  const std::string init = cfg.get_str("init", "sech:0.5");
  if (init == "zero") return Field(g, ctx.tag(), DecayClass::decaying);
  if (init.rfind("sech:", 0) == 0) {
    std::vector<double> v = parse_double_list(init.substr(5));
    const double amp = v.empty() ? 0.5 : v[0];
    const double x0 = v.size() > 1 ? v[1] : 0.0;
    if (ctx.tag().family == Family::su && ctx.tag().n == 2)
      return fixtures::su2_sech(g, amp, x0);
    // generic sech profile along the first orthogonal-complement direction
    const auto& basis = algebra_basis(ctx.tag());
    Mat dir;
    for (const Mat& e : basis) {
      Mat p = ctx.cd.pi1(e);
      if (norm_alg(p) > 0.5) {
        dir = p / norm_alg(p);
        break;
      }
    }
    return make_field(g, ctx.tag(), [&](double x) {
      return Mat(amp / std::cosh(x - x0) * dir);
    });
  }
  if (init.rfind("bumps:", 0) == 0) {
    std::vector<double> v = parse_double_list(init.substr(6));
    const double amp = v.empty() ? 0.3 : v[0];
    return fixtures::perp_bumps(ctx.cd, g, amp, static_cast<unsigned>(args.seed));
  }
  if (init.rfind("jsonl:", 0) == 0) return read_jsonl_field(init.substr(6), g, ctx.tag());
  throw ConfigError("unknown init: " + init +
                    " (expected zero | sech:amp[,x0] | bumps:amp | jsonl:PATH)");
}

// -- output writers -----------------------------------------------------------------

void write_csv(const std::string& path, const RunConfig& cfg,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw NumericalError("cannot open output file " + path);
  std::fprintf(f, "# orbitflow config=%s\n", cfg.hash_hex().c_str());
  for (size_t c = 0; c < columns.size(); ++c)
    std::fprintf(f, "%s%s", columns[c].c_str(), c + 1 < columns.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c)
      std::fprintf(f, "%.17g%s", row[c], c + 1 < row.size() ? "," : "\n");
  }
  std::fclose(f);
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      rows.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return rows;
}

Mat matrix_from_json(const json& j, int n) {
  Mat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const auto& pair = j.at(r * n + c);
      m(r, c) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
  return m;
}

void write_snapshots(const std::string& path, const RunConfig& cfg, const std::string& kind,
                     const LineGrid& g, const std::vector<double>& times,
                     const std::vector<const std::vector<Mat>*>& blocks) {
  std::ofstream f(path);
  if (!f) throw NumericalError("cannot open output file " + path);
  json meta = {{"config", cfg.hash_hex()}, {"kind", kind}, {"grid.L", g.L}, {"grid.N", g.N}};
  f << meta.dump() << "\n";
  for (size_t s = 0; s < times.size(); ++s)
    for (int i = 0; i < g.N; ++i) {
      json rec = {{"t", times[s]}, {"x", g.x(i)}, {"m", matrix_to_json((*blocks[s])[i])}};
      f << rec.dump() << "\n";
    }
}

Field read_jsonl_field(const std::string& path, const LineGrid& g, const AlgebraTag& tag) {
  std::ifstream f(path);
  if (!f) throw ConfigError("init jsonl: cannot open " + path);
  std::string line;
  Field out(g, tag, DecayClass::free_form);
  int filled = 0;
  std::optional<double> t0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.contains("t") || !rec.contains("m")) continue;
    const double t = rec["t"].get<double>();
    if (!t0) t0 = t;
    if (t != *t0) break;  // first time block only
    if (filled >= g.N) throw ConfigError("init jsonl: more samples than grid.N");
    out.values[filled++] = matrix_from_json(rec["m"], tag.matrix_dim());
  }
  if (filled != g.N)
    throw ConfigError("init jsonl: expected " + std::to_string(g.N) + " samples, got " +
                      std::to_string(filled));
  return out;
}

void write_plot_script(const std::string& path, const std::string& csv_name) {
  std::ofstream f(path);
  f << "#!/usr/bin/env python3\n"
       "# plots every scalar column of the conserved-series CSV against t\n"
       "import csv, sys\n"
       "import matplotlib.pyplot as plt\n"
       "path = sys.argv[1] if len(sys.argv) > 1 else '" << csv_name << "'\n"
       "with open(path) as fh:\n"
       "    rows = [r for r in csv.reader(fh) if r and not r[0].startswith('#')]\n"
       "head, data = rows[0], [[float(v) for v in r] for r in rows[1:]]\n"
       "t = [r[0] for r in data]\n"
       "for c in range(1, len(head)):\n"
       "    plt.plot(t, [r[c] for r in data], label=head[c])\n"
       "plt.xlabel(head[0]); plt.legend(); plt.tight_layout()\n"
       "plt.savefig(path.replace('.csv', '.png'), dpi=150)\n"
       "print('wrote', path.replace('.csv', '.png'))\n";
}

// -- subcommands ----------------------------------------------------------------------

int cmd_flow(const CliArgs& args) {
  RunConfig cfg = load_config(args);
  SpaceSetup setup = build_setup(cfg);
  HierarchyContext& ctx = setup.ctx;
  LineGrid g = build_grid(cfg);
  const double T = cfg.get_double("time.T", 1.0);
  const double dt = cfg.get_double_or_auto("time.dt", 0.0);
  const int snapshots = cfg.get_int("time.snapshots", 6);
  const std::string mode = cfg.get_str("mode", "field");

  std::vector<std::string> cols = {"t", "F0", "F1", "F2", "F3", "F4", "H", "pi0_drift"};
  std::vector<std::vector<double>> rows;

  if (mode == "field") {
    Field u0 = build_initial_field(cfg, args, ctx, g);
    FlowTrajectory traj = integrate_flow(ctx, u0, T, dt, snapshots);
    std::vector<const std::vector<Mat>*> blocks;
    for (size_t s = 0; s < traj.u.size(); ++s) {
      const Field& u = traj.u[s];
      std::vector<double> row = {traj.t[s]};
      for (int jj = 0; jj <= 4; ++jj) row.push_back(conserved_F(ctx, u, jj));
      row.push_back(height_H(undevelop(ctx, u).gamma, ctx.b));
      double p0 = 0.0;
      for (const Mat& v : u.values) p0 = std::max(p0, norm_alg(ctx.cd.pi0(v)));
      row.push_back(p0);
      rows.push_back(std::move(row));
      blocks.push_back(&u.values);
    }
    write_csv(out_path(args, cfg, "_conserved.csv"), cfg, cols, rows);
    write_snapshots(out_path(args, cfg, "_snapshots.jsonl"), cfg, "field", g, traj.t, blocks);
  } else if (mode == "curve") {
    Field u0 = build_initial_field(cfg, args, ctx, g);
    Curve gamma0 = undevelop(ctx, u0).gamma;
    CurveTrajectory traj = integrate_curve_flow(ctx, gamma0, T, dt, snapshots);
    std::vector<const std::vector<Mat>*> blocks;
    for (size_t s = 0; s < traj.gamma.size(); ++s) {
      const Curve& c = traj.gamma[s];
      Field u = develop(ctx, c).u;
      std::vector<double> row = {traj.t[s]};
      for (int jj = 0; jj <= 4; ++jj) row.push_back(conserved_F(ctx, u, jj));
      row.push_back(height_H(c, ctx.b));
      row.push_back(curve_defect(c).spectrum);
      rows.push_back(std::move(row));
      blocks.push_back(&c.field.values);
    }
    cols.back() = "spectrum_drift";
    write_csv(out_path(args, cfg, "_conserved.csv"), cfg, cols, rows);
    write_snapshots(out_path(args, cfg, "_snapshots.jsonl"), cfg, "curve", g, traj.t, blocks);
  } else {
    throw ConfigError("mode must be field or curve");
  }
  write_plot_script(out_path(args, cfg, "_plot.py"),
                    cfg.get_str("out.prefix", "run") + "_conserved.csv");
  std::printf("flow: wrote %s_{conserved.csv,snapshots.jsonl,plot.py} in %s\n",
              cfg.get_str("out.prefix", "run").c_str(), args.out_dir.c_str());
  return 0;
}

std::vector<BacklundDatum> parse_soliton_data(const RunConfig& cfg, const AlgebraTag& tag) {
  const int count = cfg.get_int("soliton.n", 1);
  const int n = tag.matrix_dim();
  std::vector<BacklundDatum> data;
  for (int k = 1; k <= count; ++k) {
    const std::string zkey = "soliton." + std::to_string(k) + ".z";
    const std::string vkey = "soliton." + std::to_string(k) + ".v";
    std::vector<double> z = parse_double_list(cfg.get_str(zkey, "0,0.75"));
    if (z.size() != 2) throw ConfigError(zkey + ": expected re,im");
    std::vector<double> v = parse_double_list(
        cfg.get_str(vkey, k == 1 ? "1,0,1,0" : "1,0,-0.4,0.8"));
    if (static_cast<int>(v.size()) != 2 * n)
      throw ConfigError(vkey + ": expected " + std::to_string(2 * n) + " numbers");
    Mat V(n, 1);
    for (int r = 0; r < n; ++r) V(r, 0) = Complex(v[2 * r], v[2 * r + 1]);
    V /= V.norm();
    data.push_back({Complex(z[0], z[1]), V});
  }
  return data;
}

int cmd_soliton(const CliArgs& args) {
  RunConfig cfg = load_config(args);
  SpaceSetup setup = build_setup(cfg);
  HierarchyContext& ctx = setup.ctx;
  LineGrid g = build_grid(cfg);
  std::vector<BacklundDatum> data = parse_soliton_data(cfg, ctx.tag());
  SolitonSolution sol = n_soliton(ctx, data);

  std::vector<double> times = parse_double_list(cfg.get_str("soliton.times", "0,0.1,0.2"));
  std::vector<std::vector<double>> rows;
  std::vector<Field> samples;
  for (double t : times) samples.push_back(sample_solution(sol, g, t));
  for (size_t s = 0; s < times.size(); ++s)
    for (int i = 0; i < g.N; ++i)
      rows.push_back({times[s], g.x(i), norm_alg(samples[s].values[i])});
  write_csv(out_path(args, cfg, "_soliton.csv"), cfg, {"t", "x", "norm_u"}, rows);

  std::vector<const std::vector<Mat>*> blocks;
  for (const Field& u : samples) blocks.push_back(&u.values);
  write_snapshots(out_path(args, cfg, "_snapshots.jsonl"), cfg, "field", g, times, blocks);

  // residual report
  const double dtp = 1e-5;
  double worst = 0.0;
  for (double t : times) {
    Field up = sample_solution(sol, g, t + dtp);
    Field um = sample_solution(sol, g, t - dtp);
    Field ut = (1.0 / (2 * dtp)) * (up - um);
    worst = std::max(worst, sup_distance(ut, flow_rhs(ctx, sample_solution(sol, g, t))));
  }
  std::printf("soliton: %zu pole(s), flow residual %.3e, wrote outputs in %s\n", data.size(),
              worst, args.out_dir.c_str());
  return 0;
}

int cmd_develop(const CliArgs& args) {
  RunConfig cfg = load_config(args);
  SpaceSetup setup = build_setup(cfg);
  HierarchyContext& ctx = setup.ctx;
  const std::string direction = cfg.get_str("develop.direction", "roundtrip");

  if (direction == "roundtrip") {
    std::vector<std::vector<double>> rows;
    std::vector<double> errs;
    std::vector<int> sizes;
    for (int N : {256, 512, 1024}) {
      RunConfig sub = cfg;
      sub.apply_override("grid.N=" + std::to_string(N));
      LineGrid g = build_grid(sub);
      Field u = build_initial_field(cfg, args, ctx, g);
      DevelopedPair fwd = undevelop(ctx, u);
      DevelopedPair back = develop(ctx, fwd.gamma);
      errs.push_back(sup_distance(back.u, u));
      sizes.push_back(N);
      rows.push_back({double(N), errs.back()});
    }
    write_csv(out_path(args, cfg, "_develop.csv"), cfg, {"N", "sup_error"}, rows);
    std::printf("develop roundtrip: errors %.3e / %.3e / %.3e, observed orders %.2f, %.2f\n",
                errs[0], errs[1], errs[2], std::log2(errs[0] / errs[1]),
                std::log2(errs[1] / errs[2]));
    return 0;
  }
  LineGrid g = build_grid(cfg);
  if (direction == "forward") {  // curve -> phase point
    Field u = build_initial_field(cfg, args, ctx, g);
    Curve gamma = undevelop(ctx, u).gamma;  // curve built from the init data
    DevelopedPair pair = develop(ctx, gamma);
    write_snapshots(out_path(args, cfg, "_snapshots.jsonl"), cfg, "field", g, {0.0},
                    {&pair.u.values});
    std::printf("develop forward: reconstruction defect %.3e\n", pair.reconstruction_defect);
    return 0;
  }
  if (direction == "inverse") {  // phase point -> curve
    Field u = build_initial_field(cfg, args, ctx, g);
    DevelopedPair pair = undevelop(ctx, u);
    write_snapshots(out_path(args, cfg, "_snapshots.jsonl"), cfg, "curve", g, {0.0},
                    {&pair.gamma.field.values});
    std::printf("develop inverse: frame residual %.3e\n", frame_residual(pair.g, pair.u));
    return 0;
  }
  throw ConfigError("develop.direction must be roundtrip | forward | inverse");
}

int cmd_finite_type(const CliArgs& args) {
  RunConfig cfg = load_config(args);
  SpaceSetup setup = build_setup(cfg);
  HierarchyContext& ctx = setup.ctx;
  RunConfig gridcfg = cfg;
  if (!cfg.has("grid.L")) gridcfg.apply_override("grid.L=5");
  if (!cfg.has("grid.N")) gridcfg.apply_override("grid.N=257");
  LineGrid g = build_grid(gridcfg);
  const int k = cfg.get_int("finite.k", 2);
  const double T = cfg.get_double("finite.T", 0.5);

  std::mt19937 gen(static_cast<unsigned>(args.seed));
  std::normal_distribution<double> dist(0.0, cfg.get_double("finite.amp", 0.25));
  FiniteTypeState init;
  for (int l = 1; l <= k; ++l) {
    RealVec c(ctx.tag().dim());
    for (int i = 0; i < c.size(); ++i) c[i] = dist(gen);
    Mat m = algebra_from_coords(ctx.tag(), c);
    init.xi.push_back(l == 1 ? ctx.cd.pi1(m) : m);
  }
  FiniteTypeRun run = finite_type_solve(ctx, k, init, g, T, cfg.get_int("time.snapshots", 5),
                                        cfg.get_double("finite.dt", 1e-3));
  std::vector<const std::vector<Mat>*> blocks;
  for (const auto& slice : run.xi) blocks.push_back(&slice[0]);
  write_snapshots(out_path(args, cfg, "_finite.jsonl"), cfg, "field", g, run.t, blocks);
  write_csv(out_path(args, cfg, "_finite.csv"), cfg, {"compat_residual", "flow_residual"},
            {{run.compat_residual, run.flow_residual}});
  std::printf("finite-type: k=%d, compatibility residual %.3e, flow residual %.3e\n", k,
              run.compat_residual, run.flow_residual);
  return 0;
}

int cmd_verify(const CliArgs& args, const std::string& suite) {
  RunConfig cfg = load_config(args);
  VerifyOptions opt;
  opt.seed = args.seed;
  opt.criteria = criteria_for_suite(suite.empty() ? cfg.get_str("verify.suite", "all") : suite);
  std::vector<CriterionResult> results = run_acceptance(opt);

  std::vector<std::vector<double>> rows;
  int failures = 0;
  for (const auto& r : results) {
    std::printf("%s  criterion %2d: %s (measured %.3e, threshold %.3e)\n",
                r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured, r.threshold);
    if (!r.detail.empty()) std::printf("      %s\n", r.detail.c_str());
    rows.push_back({double(r.id), r.measured, r.threshold, r.pass ? 1.0 : 0.0});
    if (!r.pass) ++failures;
  }
  write_csv(out_path(args, cfg, "_verify.csv"), cfg,
            {"criterion", "measured", "threshold", "pass"}, rows);
  std::printf("%d of %zu criteria failed\n", failures, results.size());
  return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soliton hierarchies and curve flows on adjoint orbits"};
  app.require_subcommand(1);

  CliArgs args;
  app.add_option("--config", args.config_path, "flat key-value config file");
  app.add_option("--out", args.out_dir, "output directory");
  app.add_option("--seed", args.seed, "seed for randomized pieces");
  app.add_option("--override", args.overrides, "KEY=VALUE config override (repeatable)");

  auto* flow = app.add_subcommand("flow", "integrate a hierarchy or curve flow");
  auto* soliton = app.add_subcommand("soliton", "generate Backlund solitons");
  auto* develop = app.add_subcommand("develop", "run the development map");
  auto* finite = app.add_subcommand("finite-type", "integrate a finite type system");
  auto* verify = app.add_subcommand("verify", "run the verification suites");
  std::string suite;
  verify->add_option("suite", suite, "suite name or 'all'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (flow->parsed()) return cmd_flow(args);
    if (soliton->parsed()) return cmd_soliton(args);
    if (develop->parsed()) return cmd_develop(args);
    if (finite->parsed()) return cmd_finite_type(args);
    if (verify->parsed()) return cmd_verify(args, suite);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}

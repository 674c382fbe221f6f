#include "qlc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <vector>

#include "CLI11.hpp"
#include "qlc/checks.hpp"
#include "qlc/config.hpp"
#include "qlc/io.hpp"
#include "qlc/uniaxial.hpp"

namespace fs = std::filesystem;

namespace qlc {
namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_override;
  std::optional<std::uint64_t> seed_override;
};

RunConfig load_config(const CommonFlags& fl) {
  RunConfig cfg = parse_config_file(fl.config_path);
  if (!fl.out_override.empty()) cfg.directory = fl.out_override;
  if (fl.seed_override) cfg.seed = *fl.seed_override;
  return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.directory);
  fs::create_directories(dir);
  return dir;
}

std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------- verify

int run_verify(const CommonFlags& fl, const std::string& filter, bool have_out) {
  RunConfig cfg = load_config(fl);
  MaterialConstants mc = config_material(cfg);
  const auto& names = check_names();

  std::vector<std::size_t> selected;
  for (std::size_t k = 0; k < names.size(); ++k)
    if (glob_match(filter, names[k])) selected.push_back(k);
  if (selected.empty()) {
    std::cerr << "filter '" << filter << "' matched no checks\n";
    return 3;
  }

  std::string lines;
  bool any_failed = false;
  for (std::size_t k : selected) {
    CheckReport rep = run_check(names[k], mc, cfg.seed + k);
    any_failed |= !rep.passed;
    std::string line = check_report_json(rep);
    std::cout << line << "\n";
    lines += line;
    lines += '\n';
  }
  if (have_out) {
    fs::path dir = prepare_out_dir(cfg);
    std::ofstream f(dir / "checks.jsonl", std::ios::binary);
    f << lines;
  }
  return any_failed ? 1 : 0;
}

// ---------------------------------------------------------------- simulate

std::string snapshot_name(std::int64_t step, OutputFormat format) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshot_%08lld.%s", static_cast<long long>(step),
                format == OutputFormat::csv ? "csv" : "qlck");
  return buf;
}

int run_simulate(const CommonFlags& fl) {
  RunConfig cfg = load_config(fl);
  fs::path dir = prepare_out_dir(cfg);
  SimState s = config_initial_state(cfg);
  SchemeConfig sc = config_scheme(cfg);

  auto emit_snapshot = [&](const std::string& name) {
    if (cfg.format == OutputFormat::csv)
      write_snapshot_csv((dir / name).string(), s.Q, s.v);
    else
      write_checkpoint((dir / name).string(), s);
  };

  EnergyLedger ledger;
  ledger_append(ledger, s, 0.0);
  if (cfg.snapshot_every > 0) emit_snapshot(snapshot_name(0, cfg.format));

  const double horizon = cfg.t_end * (1.0 - 1e-12);
  try {
    while (s.t < horizon) {
      double dtn = cfg.dt > 0.0 ? cfg.dt : auto_dt(s, sc.scheme);
      if (s.t + dtn > cfg.t_end) dtn = cfg.t_end - s.t;
      if (!(dtn > 0.0))
        throw std::runtime_error("step size collapsed at t=" + format_g(s.t));
      SchemeConfig one = sc;
      one.dt = dtn;
      StepStats st = step(s, one);
      ledger_append(ledger, s, st.dt_used);
      if (cfg.snapshot_every > 0 && s.step_count % cfg.snapshot_every == 0)
        emit_snapshot(snapshot_name(s.step_count, cfg.format));
    }
  } catch (const std::exception& e) {
    write_ledger_csv((dir / "ledger.csv").string(), ledger);
    std::cerr << "simulation aborted at t=" << format_g(s.t) << ", step " << s.step_count
              << ": " << e.what() << "\n";
    return 1;
  }

  emit_snapshot(std::string("final.") + (cfg.format == OutputFormat::csv ? "csv" : "qlck"));
  write_checkpoint((dir / "final_checkpoint.qlck").string(), s);
  write_ledger_csv((dir / "ledger.csv").string(), ledger);
  std::cout << "completed " << s.step_count << " steps to t=" << format_g(s.t) << ", E_total="
            << format_g(ledger.rows.back().e_total) << ", output in " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- sweep-L

struct SweepRow {
  double L = 0.0;
  double sup_grad_diff = 0.0;
  double sup_v_diff = 0.0;
  double sup_pi_defect_sq_over_L = 0.0;
  double sup_bulk_over_L = 0.0;
  bool failed = false;
  std::string error;
};

void sweep_accumulate(SweepRow& row, const SimState& member, const SimState& ref) {
  const Grid& g = member.Q.grid;
  TensorField dq = member.Q;
  add_scaled(dq, -1.0, ref.Q);
  TensorGrad gd = gradient(dq);
  double g2 = 0.0;
  for (int k = 0; k < g.dim; ++k) {
    double nk = norm_L2(gd.d[k]);
    g2 += nk * nk;
  }
  row.sup_grad_diff = std::max(row.sup_grad_diff, std::sqrt(g2));

  VectorField dv = member.v;
  add_scaled(dv, -1.0, ref.v);
  row.sup_v_diff = std::max(row.sup_v_diff, norm_L2(dv));

  const BulkConstants& bc = member.material.bulk;
  double defect2 = 0.0;
  for (int idx = 0; idx < g.npts(); ++idx) {
    Mat3 q = member.Q.get(idx);
    Mat3 d = q - project_pi(q, bc).pi_Q;
    defect2 += frobenius(d, d);
  }
  defect2 *= g.cell_volume();
  double L = member.material.el.L;
  row.sup_pi_defect_sq_over_L = std::max(row.sup_pi_defect_sq_over_L, defect2 / L);
  row.sup_bulk_over_L =
      std::max(row.sup_bulk_over_L, total_bulk_energy(member.Q, bc) / L);
}

int run_sweep(const CommonFlags& fl) {
  RunConfig cfg = load_config(fl);
  if (cfg.L_values.empty())
    throw ConfigError("sweep.L_values", "required for sweep-L");
  fs::path dir = prepare_out_dir(cfg);

  // Shared uniaxial initial data and reference trajectory.
  RunConfig ref_cfg = cfg;
  ref_cfg.system = SystemKind::uniaxial;
  SimState ref = config_initial_state(ref_cfg);
  SchemeConfig sc = config_scheme(cfg);

  std::vector<SimState> members;
  std::vector<SweepRow> rows(cfg.L_values.size());
  for (std::size_t m = 0; m < cfg.L_values.size(); ++m) {
    SimState mem;
    mem.Q = ref.Q;
    mem.v = ref.v;
    mem.system = SystemKind::biaxial;
    mem.material =
        make_material(cfg.a, cfg.b, cfg.c, cfg.L1, cfg.L2, cfg.L3, cfg.L4, cfg.L_values[m]);
    members.push_back(std::move(mem));
    rows[m].L = cfg.L_values[m];
  }

  double dt = cfg.dt;
  if (dt <= 0.0) {
    dt = auto_dt(ref, sc.scheme);
    for (const SimState& mem : members) dt = std::min(dt, auto_dt(mem, sc.scheme));
  }
  auto nsteps = static_cast<long long>(std::ceil(cfg.t_end / dt - 1e-9));
  std::cout << "sweep: " << members.size() << " members, shared dt=" << format_g(dt) << ", "
            << nsteps << " steps to t=" << format_g(cfg.t_end) << "\n";

  for (std::size_t m = 0; m < members.size(); ++m) sweep_accumulate(rows[m], members[m], ref);

  std::vector<char> live(members.size(), 1);
  for (long long k = 0; k < nsteps; ++k) {
    SchemeConfig one = sc;
    one.dt = std::min(dt, cfg.t_end - ref.t);
    if (!(one.dt > 0.0)) break;

    std::vector<std::future<void>> jobs;
    jobs.reserve(members.size());
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (!live[m]) {
        jobs.emplace_back();
        continue;
      }
      jobs.push_back(std::async(std::launch::async, [&, m] { step(members[m], one); }));
    }
    step(ref, one);
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (!jobs[m].valid()) continue;
      try {
        jobs[m].get();
      } catch (const std::exception& e) {
        live[m] = 0;
        rows[m].failed = true;
        rows[m].error = e.what();
        std::cerr << "sweep member L=" << format_g(rows[m].L) << " failed at t="
                  << format_g(members[m].t) << ": " << e.what() << "\n";
      }
    }
    for (std::size_t m = 0; m < members.size(); ++m)
      if (live[m]) sweep_accumulate(rows[m], members[m], ref);
  }

  std::string out = "L,sup_grad_diff_L2,sup_v_diff_L2,sup_pi_defect_sq_over_L,sup_bulk_over_L,status\n";
  bool any_failed = false;
  for (const SweepRow& r : rows) {
    any_failed |= r.failed;
    out += format_g(r.L) + "," + format_g(r.sup_grad_diff) + "," + format_g(r.sup_v_diff) + "," +
           format_g(r.sup_pi_defect_sq_over_L) + "," + format_g(r.sup_bulk_over_L) + "," +
           (r.failed ? "failed" : "ok") + "\n";
    std::cout << "L=" << format_g(r.L) << "  grad_diff=" << format_g(r.sup_grad_diff)
              << "  v_diff=" << format_g(r.sup_v_diff)
              << "  pi_defect_sq_over_L=" << format_g(r.sup_pi_defect_sq_over_L)
              << "  bulk_over_L=" << format_g(r.sup_bulk_over_L)
              << (r.failed ? "  FAILED" : "  ok") << "\n";
  }
  std::ofstream f(dir / "convergence.csv", std::ios::binary);
  f << out;
  if (!f) {
    std::cerr << "cannot write " << (dir / "convergence.csv").string() << "\n";
    return 1;
  }
  return any_failed ? 1 : 0;
}

// ---------------------------------------------------------------- export

int run_export(const std::string& in_path, std::string out_dir, const std::string& to) {
  if (!fs::exists(in_path)) {
    std::cerr << "no such snapshot: " << in_path << "\n";
    return 2;
  }
  if (out_dir.empty()) {
    out_dir = fs::path(in_path).parent_path().string();
    if (out_dir.empty()) out_dir = ".";
  }
  fs::create_directories(out_dir);
  std::string stem = fs::path(in_path).stem().string();

  // Sniff the format: checkpoints open with the 4-byte magic.
  char magic[4] = {0, 0, 0, 0};
  {
    std::ifstream f(in_path, std::ios::binary);
    f.read(magic, 4);
  }
  TensorField Q;
  VectorField v;
  if (std::string(magic, 4) == "QLCK") {
    SimState s = read_checkpoint(in_path);
    Q = std::move(s.Q);
    v = std::move(s.v);
  } else {
    Snapshot snap = read_snapshot_csv(in_path);
    Q = std::move(snap.Q);
    v = std::move(snap.v);
  }

  fs::path dir(out_dir);
  if (to == "binary") {
    SimState s;
    s.Q = std::move(Q);
    s.v = std::move(v);
    s.material = default_material();
    fs::path out = dir / (stem + ".qlck");
    write_checkpoint(out.string(), s);
    std::cout << "wrote " << out.string() << "\n";
  } else {
    fs::path fields = dir / (stem + "_fields.csv");
    fs::path director = dir / (stem + "_director.csv");
    write_snapshot_csv(fields.string(), Q, v);
    write_director_csv(director.string(), Q);
    std::cout << "wrote " << fields.string() << " and " << director.string() << "\n";
  }
  return 0;
}

}  // namespace

bool glob_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Q-tensor liquid crystal dynamics on the periodic torus"};
  app.require_subcommand(1);

  CommonFlags fl;
  std::string filter = "*";
  std::string in_path, to = "csv";

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", fl.config_path, "run configuration file");
    if (config_required) c->required();
    sub->add_option("--out", fl.out_override, "output directory override");
    sub->add_option("--seed", fl.seed_override, "seed override");
  };

  CLI::App* verify = app.add_subcommand("verify", "run the property-check registry");
  add_common(verify, true);
  verify->add_option("--filter", filter, "check-name glob (* and ?)");

  CLI::App* simulate = app.add_subcommand("simulate", "integrate to t_end, write snapshots + ledger");
  add_common(simulate, true);

  CLI::App* sweep = app.add_subcommand("sweep-L", "biaxial-vs-uniaxial convergence table over L_values");
  add_common(sweep, true);

  CLI::App* exp = app.add_subcommand("export", "snapshot to plotting CSVs (fields + director)");
  exp->add_option("--in", in_path, "snapshot file (.csv or .qlck)")->required();
  exp->add_option("--out", fl.out_override, "output directory (default: alongside input)");
  exp->add_option("--to", to, "csv (fields + director) or binary (checkpoint)")
      ->check(CLI::IsMember({"csv", "binary"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return run_verify(fl, filter, verify->count("--out") > 0);
    if (simulate->parsed()) return run_simulate(fl);
    if (sweep->parsed()) return run_sweep(fl);
    return run_export(in_path, fl.out_override, to);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qlc

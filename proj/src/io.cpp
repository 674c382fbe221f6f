#include "qlc/io.hpp"

#include "qlc/qtensor.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace qlc {
namespace {

constexpr char kMagic[4] = {'Q', 'L', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void append_g17(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& path, int lineno) {
  const char* b = s.c_str();
  char* e = nullptr;
  double x = std::strtod(b, &e);
  if (e == b || *e != '\0')
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number '" + s + "'");
  return x;
}

std::string coord_header(int dim) { return dim == 2 ? "x,y" : "x,y,z"; }

void append_point(std::string& out, const Grid& g, int idx) {
  auto p = g.point(idx);
  for (int k = 0; k < g.dim; ++k) {
    if (k) out += ',';
    append_g17(out, p[k]);
  }
}

template <typename T>
void put(std::ofstream& f, const T& x) {
  f.write(reinterpret_cast<const char*>(&x), sizeof x);
}

template <typename T>
void get(std::ifstream& f, T& x, const std::string& path) {
  f.read(reinterpret_cast<char*>(&x), sizeof x);
  if (!f) throw std::runtime_error("truncated checkpoint: " + path);
}

}  // namespace

void write_snapshot_csv(const std::string& path, const TensorField& Q, const VectorField& v) {
  const Grid& g = Q.grid;
  if (!g.same_layout(v.grid)) throw std::runtime_error("snapshot fields on different grids");
  std::string out = coord_header(g.dim) + ",Q11,Q12,Q13,Q22,Q23,v1,v2,v3\n";
  int npts = g.npts();
  out.reserve(out.size() + static_cast<std::size_t>(npts) * 240);
  for (int idx = 0; idx < npts; ++idx) {
    append_point(out, g, idx);
    for (int comp = 0; comp < 5; ++comp) {
      out += ',';
      append_g17(out, Q.c[comp][idx]);
    }
    for (int i = 0; i < 3; ++i) {
      out += ',';
      append_g17(out, v.c[i][idx]);
    }
    out += '\n';
  }
  write_text(path, out);
}

Snapshot read_snapshot_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error(path + ": empty file");
  auto header = split_csv(line);
  int dim;
  if (header.size() == 10 && header[0] == "x" && header[1] == "y" && header[2] == "Q11")
    dim = 2;
  else if (header.size() == 11 && header[0] == "x" && header[2] == "z" && header[3] == "Q11")
    dim = 3;
  else
    throw std::runtime_error(path + ": unrecognized snapshot header");

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != dim + 8)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong column count");
    std::vector<double> vals(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) vals[k] = parse_double(cells[k], path, lineno);
    rows.push_back(std::move(vals));
  }

  auto npts = static_cast<long long>(rows.size());
  int n = dim == 2 ? static_cast<int>(std::llround(std::sqrt(static_cast<double>(npts))))
                   : static_cast<int>(std::llround(std::cbrt(static_cast<double>(npts))));
  long long expect = dim == 2 ? 1LL * n * n : 1LL * n * n * n;
  if (n < 2 || expect != npts)
    throw std::runtime_error(path + ": row count " + std::to_string(npts) + " is not a " +
                             std::to_string(dim) + "-dim grid");
  double h = rows[1][0] - rows[0][0];
  if (!(h > 0.0)) throw std::runtime_error(path + ": coordinates not in index order");
  Grid g = make_grid(dim, n, h * n, Scheme::spectral);

  Snapshot snap(g);
  for (int idx = 0; idx < g.npts(); ++idx) {
    const auto& r = rows[idx];
    for (int comp = 0; comp < 5; ++comp) snap.Q.c[comp][idx] = r[dim + comp];
    for (int i = 0; i < 3; ++i) snap.v.c[i][idx] = r[dim + 5 + i];
  }
  return snap;
}

void write_checkpoint(const std::string& path, const SimState& s) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  const Grid& g = s.Q.grid;
  f.write(kMagic, 4);
  put(f, kVersion);
  put(f, static_cast<std::int32_t>(g.dim));
  put(f, static_cast<std::int32_t>(g.n));
  put(f, g.length);
  put(f, static_cast<std::int32_t>(g.scheme));
  put(f, static_cast<std::int32_t>(s.system));
  put(f, s.t);
  put(f, static_cast<std::int64_t>(s.step_count));
  const BulkConstants& bc = s.material.bulk;
  const ElasticConstants& el = s.material.el;
  for (double x : {bc.a, bc.b, bc.c, el.L1, el.L2, el.L3, el.L4, el.L}) put(f, x);
  auto dump = [&](const std::vector<double>& comp) {
    f.write(reinterpret_cast<const char*>(comp.data()),
            static_cast<std::streamsize>(comp.size() * sizeof(double)));
  };
  for (int comp = 0; comp < 5; ++comp) dump(s.Q.c[comp]);
  for (int i = 0; i < 3; ++i) dump(s.v.c[i]);
  if (!f) throw std::runtime_error("write failed: " + path);
}

SimState read_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a checkpoint file: " + path);
  std::uint32_t version;
  get(f, version, path);
  if (version != kVersion)
    throw std::runtime_error(path + ": unsupported checkpoint version " + std::to_string(version));
  std::int32_t dim, n, scheme, system;
  double length, t;
  std::int64_t steps;
  get(f, dim, path);
  get(f, n, path);
  get(f, length, path);
  get(f, scheme, path);
  get(f, system, path);
  get(f, t, path);
  get(f, steps, path);
  double con[8];
  for (double& x : con) get(f, x, path);
  if (scheme != 0 && scheme != 1) throw std::runtime_error(path + ": bad scheme tag");
  if (system != 0 && system != 1) throw std::runtime_error(path + ": bad system tag");

  Grid g = make_grid(dim, n, length, static_cast<Scheme>(scheme));
  SimState s;
  s.t = t;
  s.step_count = steps;
  s.system = static_cast<SystemKind>(system);
  s.material = make_material(con[0], con[1], con[2], con[3], con[4], con[5], con[6], con[7]);
  s.Q = TensorField(g);
  s.v = VectorField(g);
  auto load = [&](std::vector<double>& comp) {
    f.read(reinterpret_cast<char*>(comp.data()),
           static_cast<std::streamsize>(comp.size() * sizeof(double)));
    if (!f) throw std::runtime_error("truncated checkpoint: " + path);
  };
  for (int comp = 0; comp < 5; ++comp) load(s.Q.c[comp]);
  for (int i = 0; i < 3; ++i) load(s.v.c[i]);
  return s;
}

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger) {
  std::string out =
      "t,E_elastic,E_bulk_over_L,E_kinetic,E_total,"
      "dissipation_H,dissipation_gradv,identity_residual\n";
  for (const LedgerRow& r : ledger.rows) {
    double cols[8] = {r.t,     r.e_elastic,      r.e_bulk_over_L,      r.e_kinetic,
                      r.e_total, r.dissipation_H, r.dissipation_gradv, r.identity_residual};
    for (int k = 0; k < 8; ++k) {
      if (k) out += ',';
      append_g17(out, cols[k]);
    }
    out += '\n';
  }
  write_text(path, out);
}

EnergyLedger read_ledger_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line) || split_csv(line).size() != 8)
    throw std::runtime_error(path + ": unrecognized ledger header");
  EnergyLedger ledger;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != 8)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong column count");
    LedgerRow r;
    double* slots[8] = {&r.t,     &r.e_elastic,      &r.e_bulk_over_L,      &r.e_kinetic,
                        &r.e_total, &r.dissipation_H, &r.dissipation_gradv, &r.identity_residual};
    for (int k = 0; k < 8; ++k) *slots[k] = parse_double(cells[k], path, lineno);
    ledger.rows.push_back(r);
  }
  return ledger;
}

void write_director_csv(const std::string& path, const TensorField& Q) {
  const Grid& g = Q.grid;
  std::string out = coord_header(g.dim) + ",lambda_max,u1,u2,u3\n";
  int npts = g.npts();
  out.reserve(out.size() + static_cast<std::size_t>(npts) * 120);
  for (int idx = 0; idx < npts; ++idx) {
    append_point(out, g, idx);
    EigenSystem es = eigen_decompose(Q.get(idx));
    out += ',';
    append_g17(out, es.eigenvalues[2]);
    for (int i = 0; i < 3; ++i) {
      out += ',';
      append_g17(out, es.rotation[i][2]);
    }
    out += '\n';
  }
  write_text(path, out);
}

}  // namespace qlc

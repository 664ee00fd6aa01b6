#include "opmax/bench.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace opmax {

namespace {

std::vector<std::string> tokens_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::string convert_dimacs_col(const std::string& raw) {
  std::istringstream is(raw);
  std::string line;
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    char tag;
    ls >> tag;
    if (tag == 'p') {
      std::string kind;
      int e;
      ls >> kind >> n >> e;
    } else if (tag == 'e') {
      int a, b;
      ls >> a >> b;
      if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  if (n == 0)
    throw Error(ErrorClass::Usage, "FormatError", "dimacs-col: missing p line");
  std::vector<std::vector<char>> adj(n + 1, std::vector<char>(n + 1, 0));
  for (auto& [a, b] : edges) adj[a][b] = 1;
  std::ostringstream os;
  os << "n = " << n << "\n";
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      os << "c_{" << i << "," << j << "} = " << (adj[i][j] ? 1 : 0) << "\n";
  return os.str();
}

// OR-Library mknap listing: first token is the problem count; each problem
// is `n m optimum  p_1..p_n  w_{1,1}..w_{m,n}  W_1..W_m`.
std::string convert_mknap(const std::string& raw, int index) {
  auto toks = tokens_of(raw);
  size_t pos = 0;
  auto next = [&]() -> std::string {
    if (pos >= toks.size())
      throw Error(ErrorClass::Usage, "FormatError", "mknap: unexpected end of file");
    return toks[pos++];
  };
  int count = std::stoi(next());
  if (index >= count)
    throw Error(ErrorClass::Usage, "FormatError", "mknap: instance index out of range");
  for (int p = 0; p <= index; ++p) {
    int n = std::stoi(next());
    int m = std::stoi(next());
    next();  // listed optimum; not part of the instance data
    std::vector<std::string> profit(n);
    for (auto& v : profit) v = next();
    std::vector<std::vector<std::string>> wt(m, std::vector<std::string>(n));
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) wt[j][i] = next();
    std::vector<std::string> cap(m);
    for (auto& v : cap) v = next();
    if (p < index) continue;
    std::ostringstream os;
    os << "n = " << n << "\nm = " << m << "\n";
    for (int i = 0; i < n; ++i) os << "v_{" << i + 1 << "} = " << profit[i] << "\n";
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i)
        os << "w_{" << i + 1 << "," << j + 1 << "} = " << wt[j][i] << "\n";
    for (int j = 0; j < m; ++j) os << "W_{" << j + 1 << "} = " << cap[j] << "\n";
    return os.str();
  }
  throw Error(ErrorClass::Usage, "FormatError", "mknap: instance not found");
}

std::string convert_qaplib(const std::string& raw) {
  auto toks = tokens_of(raw);
  size_t pos = 0;
  auto next = [&]() -> std::string {
    if (pos >= toks.size())
      throw Error(ErrorClass::Usage, "FormatError", "qaplib: unexpected end of file");
    return toks[pos++];
  };
  int n = std::stoi(next());
  std::ostringstream os;
  os << "n = " << n << "\n";
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      os << "f_{" << i << "," << j << "} = " << next() << "\n";
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      os << "d_{" << i << "," << j << "} = " << next() << "\n";
  return os.str();
}

struct TsplibData {
  int n = 0;
  std::vector<std::vector<long long>> dist;
  std::vector<long long> demand;
  long long capacity = 0;
};

TsplibData parse_tsplib(const std::string& raw) {
  std::istringstream is(raw);
  std::string line;
  int n = 0;
  std::string weight_type, weight_format;
  std::vector<std::pair<double, double>> coords;
  std::vector<double> weights;
  TsplibData out;
  std::string section;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key.empty()) continue;
    auto strip = [&](std::string s) {
      if (!s.empty() && s.back() == ':') s.pop_back();
      return s;
    };
    key = strip(key);
    if (key == "DIMENSION") {
      std::string colon;
      ls >> colon;
      if (colon == ":") ls >> n; else n = std::stoi(colon);
    } else if (key == "EDGE_WEIGHT_TYPE") {
      std::string colon;
      ls >> colon;
      if (colon == ":") ls >> weight_type; else weight_type = colon;
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      std::string colon;
      ls >> colon;
      if (colon == ":") ls >> weight_format; else weight_format = colon;
    } else if (key == "CAPACITY") {
      std::string colon;
      ls >> colon;
      if (colon == ":") ls >> out.capacity; else out.capacity = std::stoll(colon);
    } else if (key == "NODE_COORD_SECTION") {
      section = key;
      coords.assign(n, {0, 0});
      for (int i = 0; i < n; ++i) {
        int id;
        double x, y;
        is >> id >> x >> y;
        coords[id - 1] = {x, y};
      }
      is.ignore();
    } else if (key == "EDGE_WEIGHT_SECTION") {
      double v;
      while (is >> v) {
        weights.push_back(v);
        if (is.peek() == '\n') {
          // keep reading until a section keyword appears
          std::streampos save = is.tellg();
          std::string probe;
          if (!(is >> probe)) break;
          bool numeric = !probe.empty() &&
                         (std::isdigit((unsigned char)probe[0]) || probe[0] == '-');
          if (!numeric) {
            is.seekg(save);
            break;
          }
          is.seekg(save);
        }
      }
      is.clear();
    } else if (key == "DEMAND_SECTION") {
      out.demand.assign(n, 0);
      for (int i = 0; i < n; ++i) {
        int id;
        long long d;
        is >> id >> d;
        out.demand[id - 1] = d;
      }
      is.ignore();
    }
  }
  if (n == 0)
    throw Error(ErrorClass::Usage, "FormatError", "tsplib: missing DIMENSION");
  out.n = n;
  out.dist.assign(n, std::vector<long long>(n, 0));

  if (weight_type == "EUC_2D") {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double dx = coords[i].first - coords[j].first;
        double dy = coords[i].second - coords[j].second;
        out.dist[i][j] = (long long)(std::sqrt(dx * dx + dy * dy) + 0.5);
      }
  } else if (weight_type == "GEO") {
    const double PI = 3.141592;
    const double RRR = 6378.388;
    auto to_rad = [&](double v) {
      double deg = (double)(long long)v;
      double min = v - deg;
      return PI * (deg + 5.0 * min / 3.0) / 180.0;
    };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double lat_i = to_rad(coords[i].first), lon_i = to_rad(coords[i].second);
        double lat_j = to_rad(coords[j].first), lon_j = to_rad(coords[j].second);
        double q1 = std::cos(lon_i - lon_j);
        double q2 = std::cos(lat_i - lat_j);
        double q3 = std::cos(lat_i + lat_j);
        out.dist[i][j] =
            (long long)(RRR * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0);
      }
  } else if (weight_type == "EXPLICIT") {
    size_t pos = 0;
    auto next = [&]() -> long long {
      if (pos >= weights.size())
        throw Error(ErrorClass::Usage, "FormatError", "tsplib: weight section too short");
      return (long long)weights[pos++];
    };
    if (weight_format == "FULL_MATRIX") {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.dist[i][j] = next();
    } else if (weight_format == "LOWER_DIAG_ROW") {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
          long long v = next();
          out.dist[i][j] = out.dist[j][i] = v;
        }
    } else if (weight_format == "UPPER_ROW") {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          long long v = next();
          out.dist[i][j] = out.dist[j][i] = v;
        }
    } else if (weight_format == "UPPER_DIAG_ROW") {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          long long v = next();
          out.dist[i][j] = out.dist[j][i] = v;
        }
    } else {
      throw Error(ErrorClass::Usage, "FormatError",
                  "tsplib: unsupported EDGE_WEIGHT_FORMAT " + weight_format);
    }
  } else {
    throw Error(ErrorClass::Usage, "FormatError",
                "tsplib: unsupported EDGE_WEIGHT_TYPE " + weight_type);
  }
  return out;
}

std::string convert_tsplib(const std::string& raw) {
  TsplibData d = parse_tsplib(raw);
  std::ostringstream os;
  os << "n = " << d.n << "\n";
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      if (i != j)
        os << "c_{" << i + 1 << "," << j + 1 << "} = " << d.dist[i][j] << "\n";
  return os.str();
}

std::string convert_vrp(const std::string& raw, int vehicles) {
  TsplibData d = parse_tsplib(raw);
  std::ostringstream os;
  os << "n = " << d.n << "\n";
  if (vehicles > 0) os << "m = " << vehicles << "\n";
  os << "Q = " << d.capacity << "\n";
  for (int i = 1; i < d.n; ++i)
    os << "q_{" << i + 1 << "} = " << (d.demand.empty() ? 0 : d.demand[i]) << "\n";
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      os << "d_{" << i + 1 << "," << j + 1 << "} = " << d.dist[i][j] << "\n";
  return os.str();
}

// Taillard job-shop: `n m` then an n x m matrix of processing times (job
// rows, operation order columns) and an n x m matrix of machines.
std::string convert_taillard_jsp(const std::string& raw) {
  auto toks = tokens_of(raw);
  size_t pos = 0;
  auto next = [&]() -> long long {
    if (pos >= toks.size())
      throw Error(ErrorClass::Usage, "FormatError", "taillard: unexpected end of file");
    return std::stoll(toks[pos++]);
  };
  long long n = next(), m = next();
  std::vector<std::vector<long long>> times(n, std::vector<long long>(m));
  for (auto& row : times)
    for (auto& v : row) v = next();
  std::vector<std::vector<long long>> machines(n, std::vector<long long>(m));
  for (auto& row : machines)
    for (auto& v : row) v = next();
  std::ostringstream os;
  os << "n = " << n << "\nm = " << m << "\n";
  for (long long j = 0; j < n; ++j)
    for (long long h = 0; h < m; ++h) {
      long long machine = machines[j][h];  // 1-based in Taillard listings
      os << "\\sigma_{" << j + 1 << "," << h + 1 << "} = " << machine << "\n";
      os << "p_{" << machine << "," << j + 1 << "} = " << times[j][h] << "\n";
    }
  return os.str();
}

// Taillard open-shop: `n m` then the n x m processing-time matrix
// (machine columns).
std::string convert_taillard_osp(const std::string& raw) {
  auto toks = tokens_of(raw);
  size_t pos = 0;
  auto next = [&]() -> long long {
    if (pos >= toks.size())
      throw Error(ErrorClass::Usage, "FormatError", "taillard: unexpected end of file");
    return std::stoll(toks[pos++]);
  };
  long long n = next(), m = next();
  std::ostringstream os;
  os << "n = " << n << "\nm = " << m << "\n";
  for (long long j = 1; j <= n; ++j)
    for (long long i = 1; i <= m; ++i) os << "p_{" << i << "," << j << "} = " << next() << "\n";
  return os.str();
}

std::string convert_cec(const std::string& raw) {
  auto toks = tokens_of(raw);
  std::ostringstream os;
  os << "D = " << toks.size() << "\n";
  for (size_t i = 0; i < toks.size(); ++i)
    os << "o_{" << i + 1 << "} = " << toks[i] << "\n";
  return os.str();
}

}  // namespace

std::string convert_instance(const std::string& format, const std::string& raw,
                             int index) {
  if (format == "dimacs-col") return convert_dimacs_col(raw);
  if (format == "mknap") return convert_mknap(raw, index);
  if (format == "qaplib") return convert_qaplib(raw);
  if (format == "tsplib") return convert_tsplib(raw);
  if (format == "vrp") return convert_vrp(raw, index);
  if (format == "taillard-jsp") return convert_taillard_jsp(raw);
  if (format == "taillard-osp") return convert_taillard_osp(raw);
  if (format == "cec") return convert_cec(raw);
  throw Error(ErrorClass::Usage, "FormatError", "unknown instance format '" + format + "'");
}

std::vector<BenchmarkEntry> parse_suite(const std::string& text,
                                        const std::string& base_dir) {
  std::vector<BenchmarkEntry> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    BenchmarkEntry e;
    std::string expected;
    if (!(ls >> e.problem >> e.model_path >> e.data_path >> expected >> e.n >> e.m))
      continue;
    e.expected = rat_from_decimal(expected[0] == '-' ? expected.substr(1) : expected);
    if (expected[0] == '-') e.expected = -e.expected;
    std::string extra;
    while (ls >> extra) {
      if (extra == "external-solver-required") e.external_only = true;
      else {
        e.tolerance = rat_from_decimal(extra);
      }
    }
    if (!base_dir.empty()) {
      e.model_path = base_dir + "/" + e.model_path;
      e.data_path = base_dir + "/" + e.data_path;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<BenchRowResult> run_suite(const std::vector<BenchmarkEntry>& entries,
                                      const RunConfig& base, bool full) {
  std::vector<BenchRowResult> rows;
  for (const auto& e : entries) {
    BenchRowResult row;
    row.entry = e;
    if (e.external_only && !full) {
      row.status = "SKIP";
      row.note = "external-solver-required; rerun with --full";
      rows.push_back(std::move(row));
      continue;
    }
    RunConfig cfg = base;
    cfg.model_path = e.model_path;
    cfg.data_path = e.data_path;
    cfg.int_bits = e.n;
    cfg.frac_bits = e.m;
    auto t0 = std::chrono::steady_clock::now();
    try {
      RunReport rep = run_solve(cfg);
      row.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (rep.status != SolveStatus::Optimum) {
        row.status = "FAIL";
        row.note = std::string("status ") + std::to_string((int)rep.status);
      } else {
        row.actual = rep.objective;
        Rat diff = rat_abs(rep.objective - e.expected);
        row.status = diff <= e.tolerance ? "PASS" : "FAIL";
        if (row.status == "FAIL")
          row.note = "expected " + rat_to_decimal(e.expected) + ", got " +
                     rat_to_decimal(rep.objective);
      }
    } catch (const Error& err) {
      row.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      row.status = "ERROR";
      row.note = err.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_bench_table(const std::vector<BenchRowResult>& rows) {
  std::ostringstream os;
  os << "problem      instance                      expected      actual        status  time\n";
  for (const auto& r : rows) {
    std::string prob = r.entry.problem;
    prob.resize(13, ' ');
    std::string inst = r.entry.data_path;
    auto slash = inst.find_last_of('/');
    if (slash != std::string::npos) inst = inst.substr(slash + 1);
    inst.resize(30, ' ');
    std::string exp = rat_to_decimal(r.entry.expected);
    exp.resize(14, ' ');
    std::string act = r.status == "PASS" || r.status == "FAIL" ? rat_to_decimal(r.actual) : "-";
    act.resize(14, ' ');
    std::string st = r.status;
    st.resize(8, ' ');
    char buf[32];
    snprintf(buf, sizeof buf, "%.2fs", r.seconds);
    os << prob << inst << exp << act << st << buf;
    if (!r.note.empty()) os << "  " << r.note;
    os << '\n';
  }
  return os.str();
}

}  // namespace opmax

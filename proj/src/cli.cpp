#include "redpath/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include "redpath/exact_distribution.hpp"
#include "redpath/format.hpp"
#include "redpath/gof.hpp"
#include "redpath/limit_laws.hpp"
#include "redpath/moments.hpp"
#include "redpath/signature.hpp"
#include "redpath/signature_io.hpp"
#include "redpath/walk_simulator.hpp"

namespace redpath {

namespace {

/// Failure writing or reading a file named on the command line.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return std::strtod(format_number(*d).c_str(), nullptr);
  }
  return std::get<std::string>(c);
}

std::string render(const Table& t, const std::string& command, const std::string& format) {
  std::ostringstream s;
  if (format == "json") {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["columns"] = t.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
      nlohmann::ordered_json row;
      for (std::size_t k = 0; k < t.columns.size(); ++k) row[t.columns[k]] = cell_json(r[k]);
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    s << j.dump(2) << '\n';
  } else {
    for (std::size_t k = 0; k < t.columns.size(); ++k) s << (k ? "," : "") << t.columns[k];
    s << '\n';
    for (const auto& r : t.rows) {
      for (std::size_t k = 0; k < r.size(); ++k) s << (k ? "," : "") << cell_text(r[k]);
      s << '\n';
    }
  }
  return s.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + path + "'");
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

double parse_real(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw std::invalid_argument("bad number '" + text + "'");
  return v;
}

RateKind parse_kind(const std::string& which) {
  if (which == "T") return RateKind::T;
  if (which == "L") return RateKind::L;
  if (which == "S") return RateKind::S;
  throw std::invalid_argument("--which must be T, L or S");
}

struct Common {
  int d = 2;
  std::int64_t n = 0;
  std::int64_t replicates = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string format = "csv";
};

void add_format_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_walk_options(CLI::App* cmd, Common& c, bool replicates) {
  cmd->add_option("--d", c.d, "Number of generators (>= 2)")->default_val(2);
  cmd->add_option("--n", c.n, "Number of steps")->required();
  if (replicates) {
    cmd->add_option("--replicates", c.replicates, "Independent walks")->default_val(1000);
    cmd->add_option("--seed", c.seed, "Master seed")->default_val(1);
    cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores); output does not depend on it")
        ->default_val(0);
  }
  add_format_options(cmd, c);
}

Table simulate_table(const Common& c, const std::vector<std::int64_t>& checkpoints) {
  const auto s = run_ensemble(c.d, c.n, c.replicates, c.seed, checkpoints, resolve_threads(c.threads));
  Table t;
  t.columns = {"k", "replicates"};
  for (std::size_t o = 0; o < kObservableCount; ++o) {
    const std::string name(observable_name(static_cast<Observable>(o)));
    t.columns.push_back("mean_" + name);
    t.columns.push_back("var_" + name);
  }
  for (std::size_t i = 0; i < s.checkpoints.size(); ++i) {
    std::vector<Cell> row{s.checkpoints[i], s.replicates};
    for (std::size_t o = 0; o < kObservableCount; ++o) {
      row.emplace_back(s.moments[i][o].mean());
      row.emplace_back(s.moments[i][o].variance());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table exact_table(const Common& c, std::int64_t every, const std::vector<double>& ws,
                  const std::vector<double>& thetas, bool law) {
  Table t;
  if (law) {
    const auto L = length_law(c.d, c.n);
    const auto T = turn_law(L);
    t.columns = {"value", "P_L", "P_T"};
    for (std::size_t v = 0; v < L.q.size(); ++v) {
      t.rows.push_back({static_cast<std::int64_t>(v), L.q[v], v < T.p.size() ? T.p[v] : 0.0});
    }
    return t;
  }
  if (!ws.empty()) {
    t.columns = {"n", "w", "laplace", "root", "limit"};
    for (double w : ws) {
      const double lx = log_laplace_L(c.d, c.n, w);
      t.rows.push_back({c.n, w, std::exp(lx), std::exp(lx / static_cast<double>(c.n)), laplace_limit(c.d, w)});
    }
    return t;
  }
  if (!thetas.empty()) {
    t.columns = {"n", "theta", "mgf", "root", "h_T"};
    const auto L = length_law(c.d, c.n);
    for (double th : thetas) {
      const double lm = log_mgf_T(L, th);
      t.rows.push_back({c.n, th, std::exp(lm), std::exp(lm / static_cast<double>(c.n)), h_T(c.d, th)});
    }
    return t;
  }
  if (every < 1) throw std::invalid_argument("--every must be >= 1");
  t.columns = {"n", "EL", "VarL", "ET", "VarT", "PL0"};
  const auto rows = exact_moment_table(c.d, c.n);
  for (const auto& m : rows) {
    if (m.n % every != 0 && m.n != c.n) continue;
    t.rows.push_back({m.n, m.mean_L, m.var_L, m.mean_T, m.var_T, m.p_L0});
  }
  return t;
}

Table enumerate_table(const Common& c) {
  const auto joint = enumerate_oracle(c.d, c.n);
  Table t;
  t.columns = {"L", "T", "D", "R_prev", "count"};
  for (const auto& [k, count] : joint.counts) t.rows.push_back({k.L, k.T, k.D, k.R_prev, count.str()});
  return t;
}

Table rate_output(int d, const std::string& which, const std::vector<double>& xs) {
  const auto kind = parse_kind(which);
  Table t;
  t.columns = {"x", "rate", "theta", "boundary"};
  for (double x : xs) {
    const auto p = rate_function(d, x, kind);
    t.rows.push_back({x, p.rate, p.theta, static_cast<std::int64_t>(p.at_boundary)});
  }
  return t;
}

Table clt_table(const Common& c) {
  const auto lc = constants(c.d);
  const auto sample = sample_endpoints(c.d, c.n, c.replicates, c.seed, resolve_threads(c.threads));
  const double n = static_cast<double>(c.n);
  Table t;
  t.columns = {"observable", "n", "replicates", "mean_z", "var_z", "ks", "p_value"};
  auto add = [&](const std::string& name, const std::vector<std::int64_t>& v, double drift, double offset,
                 double varslope) {
    std::vector<double> z;
    z.reserve(v.size());
    RunningMoments m;
    for (auto x : v) {
      z.push_back((static_cast<double>(x) - drift * n - offset) / std::sqrt(varslope * n));
      m.add(z.back());
    }
    const auto ks = ks_test(z, "normal");
    t.rows.push_back({name, c.n, c.replicates, m.mean(), m.variance(), ks.statistic, ks.p_value});
  };
  add("T", sample.T, lc.drift_T, lc.offset_T, lc.varslope_T);
  add("L", sample.L, lc.drift_L, lc.offset_L, lc.varslope_L);
  return t;
}

struct InvarianceStats {
  double var_w1, se_var_w1, corr_half, mean_sup, se_sup;
};

InvarianceStats invariance_stats(const PathSample& ps) {
  const std::size_t m = ps.grid.size() - 1;
  const std::size_t half = m / 2;
  RunningMoments w1, sup, a, b;
  double cross = 0.0;
  for (const auto& v : ps.values) {
    w1.add(v[m]);
    a.add(v[half]);
    b.add(v[m] - v[half]);
  }
  for (const auto& v : ps.values) cross += (v[half] - a.mean()) * (v[m] - v[half] - b.mean());
  for (double s : ps.sup) sup.add(s);
  const double cnt = static_cast<double>(ps.values.size());
  const double corr = cross / (cnt - 1.0) / std::sqrt(a.variance() * b.variance());
  // SE of the sample variance from the fourth central moment.
  const double se_var = std::sqrt(std::max(0.0, w1.central_moment4() - std::pow(w1.central_moment2(), 2)) / cnt);
  return {w1.variance(), se_var, corr, sup.mean(), sup.std_error()};
}

Table invariance_table(const Common& c, int m, const std::string& paths_out) {
  const auto ps = sample_functional(c.d, c.n, m, c.replicates, c.seed, resolve_threads(c.threads));
  const auto st = invariance_stats(ps);
  if (!paths_out.empty()) {
    Table p;
    p.columns = {"replicate"};
    for (double t : ps.grid) p.columns.push_back("t=" + format_number(t));
    p.columns.push_back("sup");
    for (std::size_t r = 0; r < ps.values.size(); ++r) {
      std::vector<Cell> row{static_cast<std::int64_t>(r)};
      for (double v : ps.values[r]) row.emplace_back(v);
      row.emplace_back(ps.sup[r]);
      p.rows.push_back(std::move(row));
    }
    std::ofstream f(paths_out, std::ios::binary);
    if (!f) throw IoError("cannot open '" + paths_out + "' for writing");
    f << render(p, "invariance-paths", "csv");
  }
  Table t;
  t.columns = {"metric", "value", "std_error"};
  t.rows.push_back({std::string("var_W1"), st.var_w1, st.se_var_w1});
  t.rows.push_back({std::string("corr_W_half_increment"), st.corr_half, 1.0 / std::sqrt(static_cast<double>(c.replicates))});
  t.rows.push_back({std::string("mean_sup_W"), st.mean_sup, st.se_sup});
  t.rows.push_back({std::string("brownian_mean_sup"), std::sqrt(2.0 / M_PI), 0.0});
  return t;
}

nlohmann::ordered_json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  try {
    return nlohmann::ordered_json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw std::invalid_argument("grid '" + text + "' is not start:stop:step");
  const double start = parse_real(parts[0]), stop = parse_real(parts[1]), step = parse_real(parts[2]);
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (stop < start) throw std::invalid_argument("grid stop must be >= start");
  const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-12));
  std::vector<double> xs;
  for (std::int64_t k = 0; k <= count; ++k) xs.push_back(start + static_cast<double>(k) * step);
  return xs;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> xs;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) xs.push_back(parse_real(item));
  if (xs.empty()) throw std::invalid_argument("empty list");
  return xs;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reduced random lattice paths: exact laws, simulation, limit laws and axis-path signatures"};
  app.require_subcommand(1);

  Common c;
  std::string checkpoints_text, w_text, theta_text, which = "T", x_text, grid_text, path_text, in_path, paths_out;
  std::int64_t every = 1;
  bool law = false;
  int m = 100, depth = 3;
  double tol = kDefaultInversionTol;

  auto* simulate = app.add_subcommand("simulate",
                                      "Monte Carlo moments per checkpoint.\n"
                                      "Columns: k,replicates,mean_X,var_X for X in S,L,D,R,T,minS");
  add_walk_options(simulate, c, true);
  simulate->add_option("--checkpoints", checkpoints_text, "Comma-separated step counts (default: powers of 2 and n)");

  auto* exact = app.add_subcommand("exact",
                                   "Exact moments by dynamic programming.\n"
                                   "Columns: n,EL,VarL,ET,VarT,PL0 (default); n,w,laplace,root,limit (--w);\n"
                                   "n,theta,mgf,root,h_T (--theta); value,P_L,P_T (--law)");
  add_walk_options(exact, c, false);
  exact->add_option("--every", every, "Emit rows for multiples of this n (and n itself)")->default_val(1);
  exact->add_option("--w", w_text, "Comma-separated w values for E w^{L_n}");
  exact->add_option("--theta", theta_text, "Comma-separated theta values for E exp(theta T_n)");
  exact->add_flag("--law", law, "Print the full laws of L_n and T_n");

  auto* enumerate = app.add_subcommand("enumerate",
                                       "Exhaustive joint counts over all (2d)^n step sequences (<= 1e8).\n"
                                       "Columns: L,T,D,R_prev,count");
  add_walk_options(enumerate, c, false);

  auto* rate = app.add_subcommand("rate", "Rate functions by Legendre transform.\nColumns: x,rate,theta,boundary");
  rate->add_option("--d", c.d, "Number of generators (>= 2)")->default_val(2);
  rate->add_option("--which", which, "T, L or S")->check(CLI::IsMember({"T", "L", "S"}));
  auto* x_opt = rate->add_option("--x", x_text, "Comma-separated x values");
  auto* grid_opt = rate->add_option("--grid", grid_text, "start:stop:step");
  x_opt->excludes(grid_opt);
  add_format_options(rate, c);

  auto* clt = app.add_subcommand("clt",
                                 "KS distance of standardized T_n and L_n to N(0,1).\n"
                                 "Columns: observable,n,replicates,mean_z,var_z,ks,p_value");
  add_walk_options(clt, c, true);

  auto* invariance = app.add_subcommand("invariance",
                                        "Functional statistics of the rescaled turn process.\n"
                                        "Columns: metric,value,std_error");
  add_walk_options(invariance, c, true);
  invariance->add_option("--m", m, "Grid intervals on [0,1]")->default_val(100);
  invariance->add_option("--paths", paths_out, "Also write the sampled grid values as CSV");

  auto* sig_compute = app.add_subcommand("sig-compute", "Truncated signature of an axis path, as JSON");
  sig_compute->add_option("--d", c.d, "Dimension")->default_val(2);
  sig_compute->add_option("--depth", depth, "Truncation depth")->default_val(3);
  sig_compute->add_option("--path", path_text, "Segments r:index, comma-separated")->required();
  sig_compute->add_option("--out", c.out, "Output file (default: stdout)");

  auto* sig_invert = app.add_subcommand("sig-invert", "Recover the reduced axis path from signature JSON");
  sig_invert->add_option("--in", in_path, "Signature JSON file")->required();
  sig_invert->add_option("--tol", tol, "Nonzero threshold for coefficients")->default_val(kDefaultInversionTol);
  sig_invert->add_option("--out", c.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      std::vector<std::int64_t> cps;
      if (!checkpoints_text.empty()) {
        for (double v : parse_real_list(checkpoints_text)) {
          if (v != std::floor(v)) throw std::invalid_argument("checkpoints must be integers");
          cps.push_back(static_cast<std::int64_t>(v));
        }
      }
      emit(render(simulate_table(c, cps), "simulate", c.format), c.out, out);
    } else if (exact->parsed()) {
      const auto ws = w_text.empty() ? std::vector<double>{} : parse_real_list(w_text);
      const auto ths = theta_text.empty() ? std::vector<double>{} : parse_real_list(theta_text);
      emit(render(exact_table(c, every, ws, ths, law), "exact", c.format), c.out, out);
    } else if (enumerate->parsed()) {
      try {
        emit(render(enumerate_table(c), "enumerate", c.format), c.out, out);
      } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
      }
    } else if (rate->parsed()) {
      std::vector<double> xs;
      if (!x_text.empty()) xs = parse_real_list(x_text);
      else if (!grid_text.empty()) xs = parse_grid(grid_text);
      else throw std::invalid_argument("rate needs --x or --grid");
      emit(render(rate_output(c.d, which, xs), "rate", c.format), c.out, out);
    } else if (clt->parsed()) {
      emit(render(clt_table(c), "clt", c.format), c.out, out);
    } else if (invariance->parsed()) {
      emit(render(invariance_table(c, m, paths_out), "invariance", c.format), c.out, out);
    } else if (sig_compute->parsed()) {
      const auto path = parse_axis_path(path_text, c.d);
      emit(signature_to_json(signature(path, c.d, depth)).dump(2) + "\n", c.out, out);
    } else if (sig_invert->parsed()) {
      const auto x = signature_from_json(read_json(in_path));
      emit(format_axis_path(invert(x, tol)) + "\n", c.out, out);
    }
  } catch (const InversionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace redpath

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <atomic>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <thread>

#include "xyep/basis.hpp"
#include "xyep/chain.hpp"
#include "xyep/ep.hpp"
#include "xyep/errors.hpp"
#include "xyep/io.hpp"
#include "xyep/oracle.hpp"
#include "xyep/topology.hpp"
#include "xyep/verify.hpp"

namespace xyep::cli {

int thread_count() {
  if (const char* env = std::getenv("XYEP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::DegenerateInput:
    case ErrorKind::SizeLimit:
      return ConfigError;
    case ErrorKind::LambdaSingular:
    case ErrorKind::MapSingular:
    case ErrorKind::EpsilonZero:
    case ErrorKind::PoleCell:
      return SingularParameter;
    case ErrorKind::AmbiguousContinuation:
      return ContinuationAmbiguous;
    default:
      return AssertionFailed;
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidConfig, what);
}

// Output goes to --output when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      require(file_.good(), "cannot open output file " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::string join(const std::vector<std::string>& args) {
  std::string s = "xyep";
  for (const auto& a : args) s += " " + a;
  return s;
}

struct Options {
  std::string output;
  int L = 4;
  std::string gamma = "0";
  std::string dump_h;
  int lmax = 14;
  double re_min = 0.4, re_max = 0.8, im_min = 0.6, im_max = 1.0;
  int nx = 41, ny = 41;
  std::string ep_near;
  int member = 0;
  std::string seam_output;
  std::string center = "0.6+0.8i";
  double radius = 0.05;
  int steps = 256;
  int turns = 1;
  int orientation = 1;
  double start_angle = 0.0;
  std::string suite = "all";
  int samples = 25;
  std::uint64_t seed = 7;
  double tol = 1e-8;
};

int cmd_spectrum(const Options& o, const std::string& command, std::ostream& os) {
  require(o.L >= 2 && o.L <= 12 && o.L % 2 == 0, "spectrum needs even L in [2, 12]");
  const cplx g = io::parse_complex(o.gamma);
  const auto spec = chain::ChainSpec::make(o.L, g);
  const auto qs = chain::quasi_energies(spec);
  const auto mb = basis::many_body_energies(spec, qs.points);
  io::write_header(os, command, {{"L", std::to_string(o.L)}, {"gamma", io::format_complex(g)}});
  if (qs.near_ep) os << "# near_ep = true\n";
  if (qs.families_coincide) os << "# families_coincide = true\n";
  io::write_spectrum_csv(os, qs, mb);

  if (!o.dump_h.empty()) {
    const auto H = oracle::build_spin_hamiltonian(spec);
    const auto ed = oracle::ed_eigen(H, o.L <= 10);
    nlohmann::ordered_json j;
    j["header"] = {{"version", io::version()}, {"command", command}};
    j["L"] = o.L;
    j["gamma"] = {g.real(), g.imag()};
    j["H"] = nlohmann::json::parse(io::matrix_json(H.matrix));
    auto& ev = j["eigenvalues"] = nlohmann::json::array();
    for (cplx e : ed.eigenvalues) ev.push_back({e.real(), e.imag()});
    if (ed.has_vectors) j["eigenvectors"] = nlohmann::json::parse(io::matrix_json(ed.eigenvectors));
    j["backward_error"] = ed.backward_error;
    std::ofstream f(o.dump_h, std::ios::binary);
    require(f.good(), "cannot open " + o.dump_h);
    f << j.dump() << '\n';
  }
  return Ok;
}

int cmd_ep_table(const Options& o, const std::string& command, std::ostream& os) {
  require(o.lmax >= 4 && o.lmax <= 16 && o.lmax % 2 == 0, "ep-table needs even Lmax in [4, 16]");
  std::vector<int> Ls;
  for (int L = 4; L <= o.lmax; L += 2) Ls.push_back(L);
  std::vector<std::vector<ep::EPRecord>> per_L(Ls.size());
  std::vector<std::exception_ptr> failures(Ls.size());
  const int threads = std::min<int>(thread_count(), static_cast<int>(Ls.size()));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  // largest L first: its resultant dominates the runtime
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int k = next++; k < static_cast<int>(Ls.size()); k = next++) {
        const size_t i = Ls.size() - 1 - static_cast<size_t>(k);
        try {
          per_L[i] = ep::locate_all_eps(Ls[i]);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  std::vector<ep::EPRecord> all;
  for (const auto& recs : per_L) all.insert(all.end(), recs.begin(), recs.end());
  io::write_header(os, command, {{"Lmax", std::to_string(o.lmax)}});
  io::write_ep_table_csv(os, all);
  return Ok;
}

topology::GammaGrid grid_of(const Options& o) {
  topology::GammaGrid g{o.re_min, o.re_max, o.im_min, o.im_max, o.nx, o.ny};
  g.validate();
  return g;
}

int cmd_overlap_map(const Options& o, const std::string& command, std::ostream& os) {
  require(o.L >= 4 && o.L <= 8 && o.L % 2 == 0, "overlap-map needs even L in [4, 8]");
  require(o.member == 0 || o.member == 1, "--member must be 0 or 1");
  const auto grid = grid_of(o);
  const cplx target = o.ep_near.empty() ? grid.at(o.nx / 2, o.ny / 2) : io::parse_complex(o.ep_near);
  auto sel = topology::default_selector(o.L, target);
  sel.member = o.member;
  const io::ConfigEntries cfg = {{"L", std::to_string(o.L)},
                                 {"re_range", io::format_real(o.re_min) + ":" + io::format_real(o.re_max)},
                                 {"im_range", io::format_real(o.im_min) + ":" + io::format_real(o.im_max)},
                                 {"resolution", std::to_string(o.nx) + "x" + std::to_string(o.ny)},
                                 {"ep", io::format_complex(sel.ep.gamma_ep)},
                                 {"ep_mode", chain::mode_name(sel.ep.mode)},
                                 {"member", std::to_string(o.member)}};
  if (o.seam_output.empty()) {
    const auto map = topology::overlap_grid(o.L, grid, sel, thread_count());
    io::write_header(os, command, cfg);
    io::write_overlap_csv(os, map);
    return Ok;
  }
  const auto sheets = topology::sheet_stitch(o.L, grid, sel, thread_count());
  io::write_header(os, command, cfg);
  io::write_overlap_csv(os, o.member == 0 ? sheets.sheet0 : sheets.sheet1);
  std::ofstream f(o.seam_output, std::ios::binary);
  require(f.good(), "cannot open " + o.seam_output);
  io::write_header(f, command, cfg);
  io::write_seam_csv(f, sheets.seam);
  return Ok;
}

int cmd_loop(const Options& o, const std::string& command, std::ostream& os) {
  require(o.L >= 2 && o.L <= 10 && o.L % 2 == 0, "loop needs even L in [2, 10]");
  require(o.orientation == 1 || o.orientation == -1, "--orientation must be 1 or -1");
  topology::LoopSpec loop{io::parse_complex(o.center), o.radius, o.steps, o.orientation, o.turns, o.start_angle};
  const auto res = topology::track_loop(o.L, loop);
  const io::ConfigEntries cfg = {{"L", std::to_string(o.L)},
                                 {"center", io::format_complex(loop.center)},
                                 {"radius", io::format_real(o.radius)},
                                 {"steps", std::to_string(o.steps)},
                                 {"turns", std::to_string(o.turns)},
                                 {"orientation", std::to_string(o.orientation)},
                                 {"start_angle", io::format_real(o.start_angle)}};
  os << io::loop_report_json(command, cfg, loop, res) << '\n';
  return res.closed ? Ok : AssertionFailed;
}

int cmd_verify(const Options& o, const std::string& command, std::ostream& os) {
  std::vector<std::string> names;
  if (o.suite == "all") {
    names = verify::suite_names();
  } else {
    const auto& known = verify::suite_names();
    require(std::find(known.begin(), known.end(), o.suite) != known.end(), "unknown suite '" + o.suite + "'");
    names = {o.suite};
  }
  io::write_header(os, command, {{"suite", o.suite}});
  bool all = true;
  for (const auto& n : names) {
    const auto r = verify::run_suite(n);
    all = all && r.passed();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", r.seconds);
    os << (r.passed() ? "PASS " : "FAIL ") << n << " (" << buf << " s)\n";
    for (const auto& c : r.checks)
      os << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << io::format_real(c.value, 6) << " vs "
         << io::format_real(c.threshold, 6) << '\n';
  }
  return all ? Ok : AssertionFailed;
}

int cmd_oracle_compare(const Options& o, const std::string& command, std::ostream& os) {
  require(o.L >= 2 && o.L <= 8 && o.L % 2 == 0, "oracle-compare needs even L in [2, 8]");
  require(o.samples >= 1, "--samples must be positive");
  std::mt19937_64 rng(o.seed);
  std::vector<cplx> gammas;
  for (int s = 0; s < o.samples; ++s) gammas.push_back(verify::sample_gamma(rng, o.L, 1e-2));
  std::vector<double> dist(gammas.size());
  std::vector<std::exception_ptr> failures(gammas.size());
  std::vector<std::thread> pool;
  const int threads = std::min<int>(thread_count(), o.samples);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (size_t i = static_cast<size_t>(t); i < gammas.size(); i += static_cast<size_t>(threads)) {
        try {
          const auto spec = chain::ChainSpec::make(o.L, gammas[i]);
          const auto ed = oracle::ed_eigen(oracle::build_spin_hamiltonian(spec), false);
          const auto qs = chain::quasi_energies(spec);
          double radius = 0.0;
          for (cplx e : ed.eigenvalues) radius = std::max(radius, std::abs(e));
          const auto mb = basis::many_body_energies(spec, qs.points);
          dist[i] = oracle::match_spectra(mb.energies(), ed.eigenvalues).max_distance / std::max(radius, 1e-300);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  io::write_header(os, command,
                   {{"L", std::to_string(o.L)}, {"samples", std::to_string(o.samples)}, {"seed", std::to_string(o.seed)}});
  os << "sample,re_gamma,im_gamma,relative_distance\n";
  double worst = 0.0;
  for (size_t i = 0; i < gammas.size(); ++i) {
    os << i << ',' << io::format_real(gammas[i].real()) << ',' << io::format_real(gammas[i].imag()) << ','
       << io::format_real(dist[i]) << '\n';
    worst = std::max(worst, dist[i]);
  }
  os << "# max_distance = " << io::format_real(worst) << '\n';
  return worst < o.tol ? Ok : AssertionFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact spectra and exceptional points of the open non-Hermitian XY chain", "xyep"};
  app.set_version_flag("--version", io::version());
  app.require_subcommand(1);
  Options o;
  app.add_option("-o,--output", o.output, "Write to this file instead of stdout");

  auto* sp = app.add_subcommand("spectrum", "Quasi-energies and the 2^L many-body energies");
  sp->add_option("--L", o.L, "Chain length (even)")->required();
  sp->add_option("--gamma", o.gamma, "Anisotropy as a+bi")->required();
  sp->add_option("--dump-h", o.dump_h, "Also write H and its ED eigendata as JSON");

  auto* et = app.add_subcommand("ep-table", "Exceptional points for L = 4..Lmax, both modes");
  et->add_option("--Lmax", o.lmax)->required();

  auto* om = app.add_subcommand("overlap-map", "Phase rigidity of a coalescing pair over a gamma grid");
  om->add_option("--L", o.L)->required();
  om->add_option("--re-min", o.re_min);
  om->add_option("--re-max", o.re_max);
  om->add_option("--im-min", o.im_min);
  om->add_option("--im-max", o.im_max);
  om->add_option("--nx", o.nx);
  om->add_option("--ny", o.ny);
  om->add_option("--ep", o.ep_near, "Track the EP nearest this gamma (default: grid center)");
  om->add_option("--member", o.member, "Which member of the pair, 0 or 1");
  om->add_option("--seam-output", o.seam_output, "Write the sheet seam CSV here");

  auto* lp = app.add_subcommand("loop", "Label permutation after continuation around a circle");
  lp->add_option("--L", o.L)->required();
  lp->add_option("--center", o.center)->required();
  lp->add_option("--radius", o.radius)->required();
  lp->add_option("--steps", o.steps);
  lp->add_option("--turns", o.turns);
  lp->add_option("--orientation", o.orientation, "1 counter-clockwise, -1 clockwise");
  lp->add_option("--start-angle", o.start_angle);

  auto* vf = app.add_subcommand("verify", "Run a named verification suite");
  vf->add_option("--suite", o.suite, "Suite name or 'all'");

  auto* oc = app.add_subcommand("oracle-compare", "Analytic vs exact-diagonalization spectra");
  oc->add_option("--L", o.L)->required();
  oc->add_option("--samples", o.samples);
  oc->add_option("--seed", o.seed);
  oc->add_option("--tol", o.tol, "Exit 1 if the max relative distance reaches this");

  std::vector<const char*> argv{"xyep"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return ConfigError;
  }

  const std::string command = join(args);
  try {
    Sink sink(o.output, out);
    auto& os = sink.stream();
    if (*sp) return cmd_spectrum(o, command, os);
    if (*et) return cmd_ep_table(o, command, os);
    if (*om) return cmd_overlap_map(o, command, os);
    if (*lp) return cmd_loop(o, command, os);
    if (*vf) return cmd_verify(o, command, os);
    return cmd_oracle_compare(o, command, os);
  } catch (const Error& e) {
    err << "xyep: " << kind_name(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "xyep: " << e.what() << '\n';
    return AssertionFailed;
  }
}

}  // namespace xyep::cli

#include "symforge/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "symforge/classical.hpp"
#include "symforge/diffop.hpp"
#include "symforge/dynamics.hpp"
#include "symforge/quantum.hpp"

namespace symforge::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr int kClassicalMaxSum = 6;
constexpr int kQuantumMaxSum = 5;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json entry_json(const ReportEntry& e) {
  return {{"identity", e.identity},
          {"anchor", e.anchor},
          {"status", status_name(e.status)},
          {"witness", e.witness},
          {"elapsed_ms", e.elapsed_ms}};
}

json counts_json(std::size_t pass, std::size_t fail, std::size_t disc) {
  return {{"pass", pass}, {"fail", fail}, {"discrepancy", disc}};
}

void print_table(const std::vector<SuiteRun>& runs, std::ostream& out) {
  out << std::left << std::setw(22) << "suite" << std::setw(5) << "m" << std::setw(5) << "n" << std::setw(6) << "k"
      << std::right << std::setw(6) << "pass" << std::setw(6) << "fail" << std::setw(6) << "disc" << std::setw(11)
      << "ms" << '\n';
  for (const auto& r : runs) {
    double ms = 0.0;
    for (const auto& e : r.report.entries) ms += e.elapsed_ms;
    out << std::left << std::setw(22) << r.suite << std::setw(5) << r.report.m << std::setw(5) << r.report.n
        << std::setw(6) << r.report.k << std::right << std::setw(6) << r.report.count(Status::pass) << std::setw(6)
        << r.report.count(Status::fail) << std::setw(6) << r.report.count(Status::discrepancy) << std::setw(11)
        << std::fixed << std::setprecision(1) << ms << '\n';
    out.unsetf(std::ios::fixed);
    for (const auto& e : r.report.entries)
      if (e.status != Status::pass)
        out << "    " << status_name(e.status) << ": " << e.identity << " [" << e.anchor << "]\n";
  }
}

bool write_json(const std::string& path, const json& doc, std::ostream& err) {
  std::ofstream f(path);
  if (!f) {
    err << "cannot write " << path << '\n';
    return false;
  }
  f << doc.dump(2) << '\n';
  return static_cast<bool>(f);
}

// --- verify -----------------------------------------------------------------

struct VerifyOptions {
  std::string target = "all";
  int m = 0;
  int n = 0;
  double alpha2 = 1.0;
  std::uint64_t seed = 0;
  std::string out = "verify-report.json";
};

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  const bool classical = o.target == "classical" || o.target == "all";
  const bool quantum = o.target == "quantum" || o.target == "all";

  std::vector<std::pair<int, int>> classical_cases, quantum_cases;
  if (o.m != 0 || o.n != 0) {
    try {
      RationalK(o.m, o.n);
    } catch (const std::invalid_argument& e) {
      err << "usage error: (m, n) = (" << o.m << ", " << o.n << "): " << e.what() << '\n';
      return kUsage;
    }
    classical_cases = quantum_cases = {{o.m, o.n}};
  } else {
    classical_cases = case_range(kClassicalMaxSum);
    quantum_cases = case_range(kQuantumMaxSum);
  }

  std::vector<std::function<SuiteRun()>> jobs;
  if (classical) {
    for (auto [m, n] : classical_cases) {
      jobs.emplace_back([m, n] { return SuiteRun{"classical algebra", classical::verify_classical_algebra({m, n})}; });
      jobs.emplace_back([m, n, &o] {
        return SuiteRun{"classical numeric", classical::poisson_fd_oracle({m, n}, o.alpha2, o.seed)};
      });
    }
  }
  if (quantum) {
    jobs.emplace_back([] { return SuiteRun{"intertwining", diffop::intertwine_check()}; });
    for (auto [m, n] : quantum_cases) {
      jobs.emplace_back([m, n] { return SuiteRun{"quantum algebra", quantum::verify_quantum_algebra({m, n})}; });
      jobs.emplace_back([m, n] { return SuiteRun{"hermitian", quantum::verify_hermitian({m, n})}; });
    }
  }

  const auto runs = run_parallel(jobs, thread_limit());
  const json doc = verify_json(runs, o.target, o.seed, o.alpha2);
  if (const auto problems = validate_report(doc); !problems.empty()) {
    for (const auto& p : problems) err << "schema: " << p << '\n';
    return kFailed;
  }
  if (!write_json(o.out, doc, err)) return kFailed;
  print_table(runs, out);
  const bool ok = doc["summary"]["passed"].get<bool>();
  out << (ok ? "PASS" : "FAIL") << "  report: " << o.out << '\n';
  return ok ? kOk : kFailed;
}

// --- simulate ---------------------------------------------------------------

struct SimulateOptions {
  int m = 3;
  int n = 2;
  double k = 0.0;  // > 0 selects an irrational surrogate, ignoring m and n
  double alpha2 = 1.0;
  double t_max = 100.0;
  double tol = 1e-10;
  double dt = 0.05;
  PhaseState initial{0.0, 1.2, 0.2, 0.4, 0.8};
  std::string out = "trajectory.csv";
  std::string report;
};

json drift_json(const dynamics::Trajectory& tr) {
  json d = {{"H", tr.relative_drift(0)}, {"Hphi", tr.relative_drift(1)}};
  if (tr.params.has_symmetries()) {
    d["O"] = tr.relative_drift(2);
    d["E"] = tr.relative_drift(3);
  }
  d["max"] = tr.max_relative_drift();
  return d;
}

// |X+|^2 against (H_phi - a)^n (H - k^2 H_phi)^m along the samples.
double product_residual(const dynamics::Trajectory& tr) {
  const auto& p = tr.params;
  const dynamics::Invariants inv(p);
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& l = tr.ledger[i];
    const double rhs = std::pow(l.Hphi - p.alpha2, p.n) * std::pow(l.H - p.k * p.k * l.Hphi, p.m);
    const double lhs = std::norm(inv.x_plus(tr.samples[i]));
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
  }
  return worst;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  dynamics::Params params;
  try {
    params = o.k > 0 ? dynamics::Params::irrational(o.k, o.alpha2)
                     : dynamics::Params::rational(RationalK(o.m, o.n), o.alpha2);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  dynamics::Trajectory tr;
  int code = kOk;
  try {
    tr = dynamics::integrate(o.initial, params, o.t_max, o.tol, o.dt);
  } catch (const dynamics::IntegrationError& e) {
    tr = e.partial();
    err << "integration error: " << e.what() << '\n';
    code = kIntegration;
  } catch (const DomainError& e) {
    err << "usage error: initial state: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  {
    std::ofstream csv(o.out);
    if (!csv) {
      err << "cannot write " << o.out << '\n';
      return kFailed;
    }
    dynamics::write_csv(tr, csv);
  }

  json side = {{"schema_version", kSchemaVersion},
               {"command", "simulate"},
               {"timestamp", utc_timestamp()},
               {"k", params.has_symmetries() ? RationalK(params.m, params.n).to_string() : std::to_string(params.k)},
               {"alpha2", params.alpha2},
               {"initial", {o.initial.theta, o.initial.phi, o.initial.p_theta, o.initial.p_phi}},
               {"t_max", o.t_max},
               {"tol", o.tol},
               {"samples", tr.samples.size()},
               {"steps", tr.steps},
               {"complete", tr.complete},
               {"error", tr.error},
               {"drift", drift_json(tr)}};

  err << std::setprecision(3) << "conservation over t = [0, "
      << (tr.samples.empty() ? 0.0 : tr.samples.back().t) << "], " << tr.steps << " steps\n";
  for (const auto& [name, v] : side["drift"].items()) err << "  max relative drift " << name << " " << v.get<double>() << '\n';
  if (params.has_symmetries()) {
    const double rhs =
        std::pow(tr.energy_phi - params.alpha2, params.n) * std::pow(tr.energy - params.k * params.k * tr.energy_phi, params.m);
    const double res = product_residual(tr);
    side["product"] = {{"q2", tr.q * tr.q}, {"formula", rhs}, {"max_relative_residual", res}};
    err << "  |Q+|^2 = " << std::setprecision(12) << tr.q * tr.q << ", (E_phi-a)^n (E-k^2 E_phi)^m = " << rhs
        << ", max residual along orbit " << std::setprecision(3) << res << '\n';
  }

  const std::string sidecar = o.report.empty() ? o.out + ".report.json" : o.report;
  if (!write_json(sidecar, side, err)) return kFailed;
  out << "wrote " << tr.samples.size() << " samples to " << o.out << ", summary " << sidecar << '\n';
  return code;
}

// --- show -------------------------------------------------------------------

struct ShowOptions {
  int m = 1;
  int n = 1;
  std::string which;
  std::string alpha2;  // rational text, empty = symbolic
};

int cmd_show(const ShowOptions& o, std::ostream& out, std::ostream& err) {
  std::optional<RationalK> k;
  try {
    k.emplace(o.m, o.n);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  std::optional<mpq_class> a;
  if (!o.alpha2.empty()) {
    try {
      a = mpq_class(o.alpha2);
      a->canonicalize();
    } catch (const std::invalid_argument&) {
      err << "usage error: --alpha2 must be rational, got " << o.alpha2 << '\n';
      return kUsage;
    }
  }

  if (o.which == "O" || o.which == "E") {
    const auto s = classical::build_symmetries(*k);
    PhaseExpr e = o.which == "O" ? s.O : s.E;
    if (a) e = e.with_alpha2(*a);
    out << e.to_string() << '\n';
  } else if (o.which == "Ohat" || o.which == "Ehat") {
    const auto s = quantum::build_symmetries(*k);
    DiffOp d = o.which == "Ohat" ? s.O : s.E;
    if (a) d = d.substitute(Var::alpha2, Poly(*a));
    out << d.to_string() << '\n';
  } else {
    const auto p = quantum::compute_P(*k);
    Poly v = o.which == "P1" ? p.P1 : p.P2;
    if (a) v = v.substitute(Var::alpha2, Poly(*a));
    out << v.to_string() << '\n';
  }
  return kOk;
}

}  // namespace

std::vector<std::pair<int, int>> case_range(int max_sum) {
  std::vector<std::pair<int, int>> cases;
  for (int s = 2; s <= max_sum; ++s)
    for (int m = 1; m < s; ++m) {
      const int n = s - m;
      if (std::gcd(m, n) == 1 && 2 * m >= n) cases.emplace_back(m, n);
    }
  return cases;
}

unsigned thread_limit() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SYMFORGE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::vector<SuiteRun> run_parallel(const std::vector<std::function<SuiteRun()>>& jobs, unsigned threads) {
  std::vector<SuiteRun> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        results[i] = jobs[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = std::min<std::size_t>(std::max(1u, threads), jobs.size());
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

json verify_json(const std::vector<SuiteRun>& runs, const std::string& target, std::uint64_t seed, double alpha2) {
  json doc = {{"schema_version", kSchemaVersion},
              {"tool", "symforge"},
              {"command", "verify"},
              {"target", target},
              {"seed", seed},
              {"alpha2", alpha2},
              {"timestamp", utc_timestamp()},
              {"runs", json::array()}};
  std::size_t pass = 0, fail = 0, disc = 0;
  for (const auto& r : runs) {
    json entries = json::array();
    for (const auto& e : r.report.entries) entries.push_back(entry_json(e));
    const auto p = r.report.count(Status::pass), f = r.report.count(Status::fail),
               d = r.report.count(Status::discrepancy);
    pass += p;
    fail += f;
    disc += d;
    doc["runs"].push_back({{"suite", r.suite},
                           {"m", r.report.m},
                           {"n", r.report.n},
                           {"k", r.report.k},
                           {"mode", r.report.mode},
                           {"counts", counts_json(p, f, d)},
                           {"entries", std::move(entries)}});
  }
  doc["summary"] = counts_json(pass, fail, disc);
  doc["summary"]["passed"] = fail == 0;
  return doc;
}

std::vector<std::string> validate_report(const json& doc) {
  std::vector<std::string> errors;
  auto require = [&](const json& obj, const std::string& where, const char* key, json::value_t type) {
    if (!obj.is_object() || !obj.contains(key)) {
      errors.push_back(where + ": missing '" + key + "'");
      return false;
    }
    const auto t = obj[key].type();
    const bool numeric = type == json::value_t::number_float &&
                         (t == json::value_t::number_integer || t == json::value_t::number_unsigned);
    const bool integral = type == json::value_t::number_integer && t == json::value_t::number_unsigned;
    if (t != type && !numeric && !integral) {
      errors.push_back(where + ": '" + key + "' has type " + obj[key].type_name());
      return false;
    }
    return true;
  };
  using V = json::value_t;
  if (!doc.is_object()) return {"report is not an object"};
  if (require(doc, "report", "schema_version", V::number_integer) && doc["schema_version"] != kSchemaVersion)
    errors.push_back("report: unsupported schema_version " + doc["schema_version"].dump());
  require(doc, "report", "command", V::string);
  require(doc, "report", "target", V::string);
  require(doc, "report", "seed", V::number_integer);
  require(doc, "report", "alpha2", V::number_float);
  require(doc, "report", "timestamp", V::string);

  std::size_t totals[3] = {0, 0, 0};
  if (require(doc, "report", "runs", V::array)) {
    for (std::size_t i = 0; i < doc["runs"].size(); ++i) {
      const json& run = doc["runs"][i];
      const std::string where = "runs[" + std::to_string(i) + "]";
      require(run, where, "suite", V::string);
      require(run, where, "m", V::number_integer);
      require(run, where, "n", V::number_integer);
      require(run, where, "k", V::string);
      if (require(run, where, "mode", V::string) && run["mode"] != "symbolic" && run["mode"] != "numeric")
        errors.push_back(where + ": mode must be symbolic or numeric");
      std::size_t counted[3] = {0, 0, 0};
      if (require(run, where, "entries", V::array)) {
        for (std::size_t j = 0; j < run["entries"].size(); ++j) {
          const json& e = run["entries"][j];
          const std::string ew = where + ".entries[" + std::to_string(j) + "]";
          require(e, ew, "identity", V::string);
          if (require(e, ew, "anchor", V::string) && e["anchor"].get<std::string>().empty())
            errors.push_back(ew + ": empty anchor");
          require(e, ew, "witness", V::string);
          require(e, ew, "elapsed_ms", V::number_float);
          if (require(e, ew, "status", V::string)) {
            const auto s = e["status"].get<std::string>();
            if (s == "pass") ++counted[0];
            else if (s == "fail") ++counted[1];
            else if (s == "discrepancy") ++counted[2];
            else errors.push_back(ew + ": unknown status '" + s + "'");
          }
        }
      }
      if (run.contains("counts") && run["counts"] != counts_json(counted[0], counted[1], counted[2]))
        errors.push_back(where + ": counts do not match entries");
      for (int c = 0; c < 3; ++c) totals[c] += counted[c];
    }
  }
  if (require(doc, "report", "summary", V::object)) {
    json expected = counts_json(totals[0], totals[1], totals[2]);
    expected["passed"] = totals[1] == 0;
    if (doc["summary"] != expected) errors.push_back("summary does not match entries");
  }
  return errors;
}

json strip_volatile(json report) {
  report.erase("timestamp");
  if (report.contains("runs"))
    for (auto& run : report["runs"])
      for (auto& e : run["entries"]) e.erase("elapsed_ms");
  return report;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"symforge: symbolic and numeric checks of the Lissajous system on the sphere"};
  app.require_subcommand(1);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "check the symmetry algebra identities and write a JSON report");
  verify->add_option("--target", vo.target, "classical, quantum or all")
      ->check(CLI::IsMember({"classical", "quantum", "all"}));
  verify->add_option("--m", vo.m, "numerator of k (with --n; default: every case in range)");
  verify->add_option("--n", vo.n, "denominator of k");
  verify->add_option("--alpha2", vo.alpha2, "alpha^2 used by the numeric oracle");
  verify->add_option("--seed", vo.seed, "seed for the random oracle states");
  verify->add_option("--out", vo.out, "report path");

  SimulateOptions so;
  auto* simulate = app.add_subcommand("simulate", "integrate one classical orbit and monitor the invariants");
  simulate->add_option("--m", so.m);
  simulate->add_option("--n", so.n);
  simulate->add_option("--k", so.k, "irrational surrogate k; overrides --m/--n");
  simulate->add_option("--alpha2", so.alpha2)->check(CLI::PositiveNumber);
  simulate->add_option("--tmax", so.t_max)->check(CLI::NonNegativeNumber);
  simulate->add_option("--tol", so.tol)->check(CLI::PositiveNumber);
  simulate->add_option("--dt", so.dt, "sample interval")->check(CLI::PositiveNumber);
  simulate->add_option("--theta0", so.initial.theta);
  simulate->add_option("--phi0", so.initial.phi);
  simulate->add_option("--ptheta0", so.initial.p_theta);
  simulate->add_option("--pphi0", so.initial.p_phi);
  simulate->add_option("--seed", vo.seed, "accepted for uniformity; the integrator is deterministic");
  simulate->add_option("--out", so.out, "trajectory CSV");
  simulate->add_option("--report", so.report, "summary JSON (default: <out>.report.json)");

  ShowOptions wo;
  auto* show = app.add_subcommand("show", "print a symmetry or structure polynomial in canonical form");
  show->add_option("which", wo.which, "O, E, Ohat, Ehat, P1 or P2")
      ->required()
      ->check(CLI::IsMember({"O", "E", "Ohat", "Ehat", "P1", "P2"}));
  show->add_option("--m", wo.m);
  show->add_option("--n", wo.n);
  show->add_option("--alpha2", wo.alpha2, "substitute a rational value for alpha^2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (verify->parsed()) {
      if ((vo.m == 0) != (vo.n == 0)) {
        err << "usage error: give both --m and --n, or neither\n";
        return kUsage;
      }
      return cmd_verify(vo, out, err);
    }
    if (simulate->parsed()) return cmd_simulate(so, out, err);
    return cmd_show(wo, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  }
}

}  // namespace symforge::cli

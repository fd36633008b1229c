// ctverify: batch driver for residue-identity verification and Zhu tables.
//
// Exit status: 0 all checks passed, 1 operational or usage error,
// 2 a check was falsified (the failing remainder is in the report).

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ctverify/report.hpp"

namespace fs = std::filesystem;
using namespace ctv;

namespace {

constexpr int kOk = 0;
constexpr int kOperational = 1;
constexpr int kFalsified = 2;

std::vector<long> parse_range(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto dots = part.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stol(part));
      } else {
        long lo = std::stol(part.substr(0, dots));
        long hi = std::stol(part.substr(dots + 2));
        if (hi < lo) throw Error("empty range '" + part + "'");
        for (long v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw Error("malformed range '" + s + "' (expected N, A..B or a comma list)");
    }
  }
  if (out.empty()) throw Error("empty range '" + s + "'");
  return out;
}

fs::path cache_dir() {
  if (const char* env = std::getenv("CTVERIFY_CACHE_DIR"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "ctverify";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "ctverify";
  return fs::temp_directory_path() / "ctverify-cache";
}

struct CaseSpec {
  CaseId id = CaseId::A1;
  long m = 2;
  long p = 1;
  CaseOptions opts;
  RunMode mode = RunMode::Interp;

  [[nodiscard]] std::string stem() const {
    std::string s = to_string(id) + "_m" + std::to_string(m) + "_p" + std::to_string(p) + "_" + to_string(mode);
    if (opts.perturb_rhs) s += "_perturbed";
    return s;
  }

  // Every input that changes the report, plus the code version.
  [[nodiscard]] std::string cache_key() const {
    const IdentityCase c = build_case(id, m, p, opts);
    std::string k = to_string(id) + "|m=" + std::to_string(m) + "|p=" + std::to_string(p);
    k += "|variant=" + (c.variant ? to_string(*c.variant) : std::string("-"));
    k += "|dominance=" + to_string(c.dominance);
    k += "|numerator=" + (c.numerator ? to_string(*c.numerator) : std::string("-"));
    k += "|xi=" + (c.xi_exponent ? to_string(*c.xi_exponent) : std::string("-"));
    k += "|perturbed=" + std::string(c.perturbed ? "1" : "0");
    k += "|mode=" + to_string(mode);
    k += "|version=" CTVERIFY_VERSION;
    return k;
  }
};

std::string cache_file_name(const std::string& key) {
  std::string s;
  for (char c : key) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return s + ".json";
}

std::optional<json> cache_load(const std::string& key) {
  const fs::path path = cache_dir() / cache_file_name(key);
  if (!fs::exists(path)) return std::nullopt;
  try {
    std::ifstream in(path);
    json j = json::parse(in);
    if (j.at("cache_key").get<std::string>() != key || j.at("report").at("schema").get<int>() != kSchemaVersion) {
      throw Error("key mismatch");
    }
    return j.at("report");
  } catch (const std::exception& e) {
    std::cerr << "warning: ignoring corrupt cache entry " << path.string() << " (" << e.what() << ")\n";
    return std::nullopt;
  }
}

void cache_store(const std::string& key, const json& report) {
  try {
    json j = {{"cache_key", key}, {"report", report}};
    write_atomic(cache_dir() / cache_file_name(key), j.dump(1) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "warning: cache write failed: " << e.what() << "\n";
  }
}

struct Outcome {
  json report;
  std::optional<json> stats;
  bool from_cache = false;
};

Outcome run_one(const CaseSpec& spec, unsigned engine_jobs, bool use_cache) {
  std::string key;
  try {
    key = spec.cache_key();
  } catch (const std::exception&) {
    // build_case rejects the parameters; run_range records the error below.
  }
  if (use_cache && !key.empty()) {
    if (auto hit = cache_load(key)) return {*hit, std::nullopt, true};
  }
  RunOptions run;
  run.mode = spec.mode;
  run.jobs = engine_jobs;
  auto reports = verify_range(spec.id, {spec.m}, {spec.p}, spec.opts, run);
  Outcome out{report_json(reports.front()), stats_json(reports.front()), false};
  if (use_cache && !key.empty() && reports.front().computed()) cache_store(key, out.report);
  return out;
}

std::vector<Outcome> run_all(const std::vector<CaseSpec>& specs, unsigned jobs, bool use_cache) {
  std::vector<Outcome> out(specs.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(specs.size())));
  const unsigned engine_jobs = specs.size() == 1 ? std::max(1u, jobs) : 1u;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) out[i] = run_one(specs[i], engine_jobs, use_cache);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

std::string summary_from_json(const std::vector<Outcome>& outs) {
  std::ostringstream os;
  os << "| id | m | p | mode | division exact | residual | scale | status |\n"
     << "|---|---|---|---|---|---|---|---|\n";
  std::size_t passed = 0;
  for (const auto& o : outs) {
    const json& r = o.report;
    const bool ok = r.at("passed").get<bool>();
    const bool div = r.at("division_exact").get<bool>();
    passed += ok;
    std::string status = !r.at("computed").get<bool>() ? "error: " + r.at("error").get<std::string>()
                                                        : (ok ? "pass" : "FAIL");
    os << "| " << r.at("id").get<std::string>() << " | " << r.at("m") << " | " << r.at("p") << " | "
       << r.at("mode").get<std::string>() << " | " << (div ? "yes" : "no") << " | "
       << (div ? r.at("residual_text").get<std::string>() : "-") << " | "
       << (div ? r.at("scale").get<std::string>() : "-") << " | " << status << " |\n";
  }
  os << "\n" << passed << "/" << outs.size() << " passed\n";
  return os.str();
}

int exit_status(const std::vector<Outcome>& outs) {
  bool error = false;
  bool falsified = false;
  for (const auto& o : outs) {
    if (!o.report.at("computed").get<bool>()) {
      error = true;
    } else if (!o.report.at("passed").get<bool>()) {
      falsified = true;
    }
  }
  return falsified ? kFalsified : (error ? kOperational : kOk);
}

struct VerifyArgs {
  std::string id;
  std::string m = "2";
  std::string p = "1";
  std::string mode = "interp";
  std::string variant;
  std::string dominance;
  std::string numerator = "tabulated";
  std::string xi = "balanced";
  bool perturb = false;
  bool no_cache = false;
};

std::vector<CaseSpec> expand(const VerifyArgs& a) {
  std::vector<CaseId> ids;
  if (a.id == "all") {
    ids = all_case_ids();
  } else {
    std::stringstream ss(a.id);
    std::string part;
    while (std::getline(ss, part, ',')) ids.push_back(parse_case_id(part));
  }
  CaseOptions opts;
  if (!a.variant.empty()) opts.variant = parse_exponent_variant(a.variant);
  if (!a.dominance.empty()) opts.dominance = parse_dominance(a.dominance);
  opts.numerator = parse_numerator_variant(a.numerator);
  opts.xi_exponent = parse_xi_exponent(a.xi);
  opts.perturb_rhs = a.perturb;
  const RunMode mode = parse_run_mode(a.mode);
  std::vector<CaseSpec> out;
  for (CaseId id : ids) {
    for (long m : parse_range(a.m)) {
      for (long p : parse_range(a.p)) out.push_back({id, m, p, opts, mode});
    }
  }
  return out;
}

int cmd_verify(const VerifyArgs& a, const fs::path& out_dir, unsigned jobs) {
  const auto specs = expand(a);
  const auto outs = run_all(specs, jobs, !a.no_cache);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    write_atomic(out_dir / (specs[i].stem() + ".json"), outs[i].report.dump(2) + "\n");
    if (outs[i].stats) write_atomic(out_dir / "stats" / (specs[i].stem() + ".json"), outs[i].stats->dump(2) + "\n");
    const json& r = outs[i].report;
    if (r.at("computed").get<bool>() && !r.at("passed").get<bool>()) {
      std::cerr << specs[i].stem() << ": FALSIFIED";
      if (!r.at("division_exact").get<bool>()) {
        std::cerr << ", remainder " << poly_from_json(r.at("remainder")).to_string("t");
      }
      std::cerr << "\n";
    } else if (!r.at("computed").get<bool>()) {
      std::cerr << specs[i].stem() << ": error: " << r.at("error").get<std::string>() << "\n";
    }
  }
  const std::string summary = summary_from_json(outs);
  write_atomic(out_dir / "summary.md", summary);
  std::cout << summary;
  return exit_status(outs);
}

int cmd_residual(const VerifyArgs& a, const fs::path& out_dir, unsigned jobs) {
  int status = kOk;
  for (const auto& spec : expand(a)) {
    const IdentityCase c = build_case(spec.id, spec.m, spec.p, spec.opts);
    RunOptions run;
    run.mode = spec.mode;
    run.jobs = jobs;
    json j;
    bool ok = false;
    if (c.partner) {
      PairReport pr = run_pair(spec.id, spec.m, spec.p, spec.opts, run);
      j = pair_json(pr);
      ok = pr.first.passed() && pr.second.passed();
      std::cout << to_string(pr.first.id) << "(m=" << spec.m << ",p=" << spec.p
                << "): " << pr.first.residual.to_string("t") << "\n"
                << to_string(pr.second.id) << "(m=" << spec.m << ",p=" << spec.p
                << "): " << pr.second.residual.to_string("t") << "\n"
                << "gcd: " << pr.gcd.to_string("t") << (pr.coprime ? " (coprime)" : "") << "\n";
    } else {
      IdentityReport r = run_case(c, run);
      j = report_json(r);
      ok = r.passed();
      std::cout << to_string(r.id) << "(m=" << spec.m << ",p=" << spec.p << "): residual "
                << r.residual.to_string("t") << ", scale " << to_string(r.scale) << "\n";
    }
    write_atomic(out_dir / ("residual_" + spec.stem() + ".json"), j.dump(2) + "\n");
    if (!ok) status = kFalsified;
  }
  return status;
}

struct ZhuArgs {
  std::string family = "D";
  long m = 2;
  long p = 1;
  std::vector<std::string> r_rows;
};

int cmd_zhu_table(const ZhuArgs& a, const fs::path& out_dir) {
  std::vector<zhu::RParams> rr;
  for (const auto& s : a.r_rows) {
    std::stringstream ss(s);
    std::string f[4];
    for (auto& part : f) {
      if (!std::getline(ss, part, ',')) throw Error("--r expects i,j,k,l, got '" + s + "'");
    }
    rr.push_back({std::stol(f[0]), std::stol(f[1]), std::stol(f[2]), parse_rat(f[3])});
  }
  const zhu::Table t = zhu::build_table(zhu::parse_family(a.family), a.m, a.p, rr);
  const std::string stem = "zhu_" + a.family + "_m" + std::to_string(a.m) + "_p" + std::to_string(a.p);
  write_atomic(out_dir / (stem + ".csv"), zhu::table_csv(t));
  write_atomic(out_dir / (stem + ".md"), zhu::table_markdown(t));
  write_atomic(out_dir / (stem + ".json"), table_json(t).dump(2) + "\n");
  std::cout << zhu::table_markdown(t);
  if (!t.count_matches) {
    std::cerr << "warning: " << t.rows.size() << " rows, the count formula gives " << t.expected_count
              << "; supply " << zhu::r_row_count(t.family, t.m, t.p) << " R(i,j,k) rows with --r\n";
  }
  const auto dups = zhu::duplicate_weights(t);
  for (const auto& d : dups) {
    std::cerr << "warning: rows " << t.rows[d.a].label << " and " << t.rows[d.b].label
              << " share their lowest weights\n";
  }
  return kOk;
}

int cmd_zhu_dims(const ZhuArgs& a) {
  const auto d = zhu::dims(zhu::parse_family(a.family), a.m, a.p);
  std::cout << "zhu_dim=" << d.zhu_dim << ", irreducibles=" << d.irreducible_count;
  if (d.center_dim) std::cout << ", center_dim=" << *d.center_dim;
  std::cout << "\n";
  return kOk;
}

int cmd_oracle(const VerifyArgs& a, const std::string& ts) {
  int status = kOk;
  for (const auto& spec : expand(a)) {
    const IdentityCase c = build_case(spec.id, spec.m, spec.p, spec.opts);
    for (std::size_t d = 0; d < c.lhs.size(); ++d) {
      const RatPoly engine = constant_term(c.lhs[d]).value;
      for (long t : parse_range(ts)) {
        const Rat dense = dense_oracle(c.lhs[d], Rat(t));
        const Rat sparse = engine(Rat(t));
        const bool ok = dense == sparse;
        std::cout << to_string(spec.id) << " m=" << spec.m << " p=" << spec.p << " display=" << d << " t=" << t
                  << " engine=" << to_string(sparse) << " dense=" << to_string(dense) << (ok ? " ok" : " MISMATCH")
                  << "\n";
        if (!ok) status = kFalsified;
      }
    }
  }
  return status;
}

int cmd_dyson(long n, long p) {
  const RatPoly v = constant_term(dyson_expression(n, p)).value;
  const Int expect = dyson_closed_form(n, p);
  std::cout << v.to_string("t") << "\n";
  if (v != RatPoly(Rat(expect))) {
    std::cerr << "mismatch: closed form gives " << expect.get_str() << "\n";
    return kFalsified;
  }
  return kOk;
}

void add_case_flags(CLI::App* sub, VerifyArgs& a, bool id_required) {
  auto* id = sub->add_option("--id", a.id, "case id (A1..A6, H_pm, Htilde_pm, F_pm, Ftilde_pm), a comma list, or all");
  if (id_required) id->required();
  sub->add_option("--m", a.m, "m value or range (N, A..B, comma list)");
  sub->add_option("--p", a.p, "p value or range");
  sub->add_option("--variant", a.variant, "x0 exponent reading: m(t+1) or (m+1)t");
  sub->add_option("--dominance", a.dominance, "expansion rule for negative powers: x0, first, second");
  sub->add_option("--numerator", a.numerator, "tilde-F numerator: tabulated or printed");
  sub->add_option("--xi-exponent", a.xi, "A2 block exponent: balanced or printed");
  sub->add_flag("--perturb-rhs", a.perturb, "raise k of the first right-hand binomial by one");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctverify: exact verification of constant-term identities"};
  app.set_version_flag("--version", std::string(CTVERIFY_VERSION));
  app.require_subcommand(1);

  std::string out_dir = "ctverify-out";
  unsigned jobs = 1;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 1024u));

  VerifyArgs va;
  std::string ts = "0..5";
  auto* verify = app.add_subcommand("verify", "run identity checks and write reports");
  add_case_flags(verify, va, true);
  verify->add_option("--mode", va.mode, "exact, interp or both")->capture_default_str();
  verify->add_flag("--no-cache", va.no_cache, "ignore and do not update the result cache");

  auto* residual = app.add_subcommand("residual", "print residual polynomials and the coprimality gcd");
  add_case_flags(residual, va, true);
  residual->add_option("--mode", va.mode, "exact, interp or both");

  auto* oracle = app.add_subcommand("oracle", "compare the engine with the dense expansion at sample t");
  add_case_flags(oracle, va, true);
  oracle->add_option("--t", ts, "t values")->capture_default_str();

  ZhuArgs za;
  auto* table = app.add_subcommand("zhu-table", "lowest-weight table as CSV, Markdown and JSON");
  table->add_option("--family", za.family, "A or D")->required();
  table->add_option("--m", za.m)->required();
  table->add_option("--p", za.p)->required();
  table->add_option("--r", za.r_rows, "R(i,j,k) row as i,j,k,l (repeatable)");

  auto* dims = app.add_subcommand("zhu-dims", "Zhu algebra dimension and irreducible count");
  dims->add_option("--family", za.family, "A or D")->required();
  dims->add_option("--m", za.m)->required();
  dims->add_option("--p", za.p)->required();

  long dn = 2;
  long dp = 1;
  auto* dyson = app.add_subcommand("dyson-sanity", "Dyson constant term through the engine");
  dyson->add_option("--n", dn)->required();
  dyson->add_option("--p", dp)->required();

  auto* registry = app.add_subcommand("registry", "print the case registry as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kOperational;
  }

  try {
    if (*verify) return cmd_verify(va, out_dir, jobs);
    if (*residual) return cmd_residual(va, out_dir, jobs);
    if (*oracle) return cmd_oracle(va, ts);
    if (*table) return cmd_zhu_table(za, out_dir);
    if (*dims) return cmd_zhu_dims(za);
    if (*dyson) return cmd_dyson(dn, dp);
    if (*registry) {
      std::cout << registry_json().dump(2) << "\n";
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOperational;
  }
  return kOperational;
}

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <doctest.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Sandbox {
 public:
  Sandbox() : dir_(fs::temp_directory_path() / ("ctverify_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Sandbox() { fs::remove_all(dir_); }

  Run run(const std::string& args, const std::string& cache = "cache") const {
    const fs::path o = dir_ / "stdout.txt";
    const fs::path e = dir_ / "stderr.txt";
    const std::string cmd = "CTVERIFY_CACHE_DIR='" + (dir_ / cache).string() + "' '" + CTVERIFY_CLI + "' --out '" +
                            (dir_ / "out").string() + "' " + args + " >'" + o.string() + "' 2>'" + e.string() + "'";
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(o), slurp(e)};
  }

  [[nodiscard]] fs::path path(const std::string& rel) const { return dir_ / rel; }

 private:
  fs::path dir_;
};

std::size_t count_files(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
  return n;
}

}  // namespace

TEST_CASE("cli: zhu-dims and dyson-sanity") {
  Sandbox sb;
  auto d = sb.run("zhu-dims --family D --m 2 --p 2");
  CHECK(d.status == 0);
  CHECK(d.out == "zhu_dim=23, irreducibles=22\n");
  auto y = sb.run("dyson-sanity --n 3 --p 1");
  CHECK(y.status == 0);
  CHECK(y.out == "6\n");
}

TEST_CASE("cli: verify writes reports and a summary") {
  Sandbox sb;
  auto r = sb.run("verify --id A2 --m 2 --p 1 --mode both");
  CHECK(r.status == 0);
  const std::string rep = slurp(sb.path("out/A2_m2_p1_both.json"));
  CHECK(rep.find("\"division_exact\": true") != std::string::npos);
  CHECK(rep.find("\"scale\": \"-4/45\"") != std::string::npos);
  CHECK(rep.find("\"mode_agreement\": true") != std::string::npos);
  CHECK(fs::exists(sb.path("out/summary.md")));
  CHECK(fs::exists(sb.path("out/stats/A2_m2_p1_both.json")));
}

TEST_CASE("cli: exit codes") {
  Sandbox sb;
  auto bad = sb.run("verify --id A9");
  CHECK(bad.status == 1);
  auto usage = sb.run("verify --m 2");
  CHECK(usage.status == 1);
  auto range = sb.run("verify --id H_pm --m 2..x");
  CHECK(range.status == 1);
  auto fals = sb.run("verify --id A1 --m 2 --p 1 --perturb-rhs");
  CHECK(fals.status == 2);
  CHECK(fals.err.find("remainder") != std::string::npos);
  const std::string rep = slurp(sb.path("out/A1_m2_p1_interp_perturbed.json"));
  CHECK(rep.find("\"division_exact\": false") != std::string::npos);
  CHECK(rep.find("\"remainder\": []") == std::string::npos);
  auto err = sb.run("verify --id A3 --m 2 --p 1");
  CHECK(err.status == 1);
  auto help = sb.run("--help");
  CHECK(help.status == 0);
}

TEST_CASE("cli: cache reuse, key separation and corruption recovery") {
  Sandbox sb;
  auto first = sb.run("verify --id H_pm --m 2 --p 1");
  REQUIRE(first.status == 0);
  const std::string rep1 = slurp(sb.path("out/H_pm_m2_p1_interp.json"));
  CHECK(count_files(sb.path("cache")) == 1);
  CHECK(fs::exists(sb.path("out/stats/H_pm_m2_p1_interp.json")));

  fs::remove_all(sb.path("out"));
  auto second = sb.run("verify --id H_pm --m 2 --p 1");
  CHECK(second.status == 0);
  CHECK(slurp(sb.path("out/H_pm_m2_p1_interp.json")) == rep1);
  // a cache hit computes nothing, so no fresh timing sidecar
  CHECK_FALSE(fs::exists(sb.path("out/stats/H_pm_m2_p1_interp.json")));

  sb.run("verify --id H_pm --m 2 --p 1 --mode exact");
  CHECK(count_files(sb.path("cache")) == 2);

  for (const auto& e : fs::directory_iterator(sb.path("cache"))) {
    std::ofstream(e.path(), std::ios::trunc) << "{not json";
  }
  auto third = sb.run("verify --id H_pm --m 2 --p 1");
  CHECK(third.status == 0);
  CHECK(third.err.find("warning") != std::string::npos);
  CHECK(slurp(sb.path("out/H_pm_m2_p1_interp.json")) == rep1);

  auto nocache = sb.run("verify --id H_pm --m 2 --p 1 --no-cache", "other-cache");
  CHECK(nocache.status == 0);
  CHECK(count_files(sb.path("other-cache")) == 0);
}

TEST_CASE("cli: reports are byte-identical across runs and job counts") {
  Sandbox sb;
  sb.run("verify --id H_pm,F_pm --m 2..3 --p 1 --no-cache");
  const std::string a = slurp(sb.path("out/F_pm_m3_p1_interp.json"));
  const std::string sa = slurp(sb.path("out/summary.md"));
  fs::remove_all(sb.path("out"));
  sb.run("--jobs 3 verify --id H_pm,F_pm --m 2..3 --p 1 --no-cache");
  CHECK(slurp(sb.path("out/F_pm_m3_p1_interp.json")) == a);
  CHECK(slurp(sb.path("out/summary.md")) == sa);
}

TEST_CASE("cli: zhu-table, residual, oracle, registry") {
  Sandbox sb;
  auto t = sb.run("zhu-table --family D --m 2 --p 1 --r 1,0,0,0 --r 1,1,0,2");
  CHECK(t.status == 0);
  CHECK(slurp(sb.path("out/zhu_D_m2_p1.csv")) == slurp(fs::path(CTVERIFY_GOLDEN_DIR) / "zhu_D_m2_p1.csv"));
  CHECK(fs::exists(sb.path("out/zhu_D_m2_p1.md")));
  auto warn = sb.run("zhu-table --family A --m 2 --p 1");
  CHECK(warn.status == 0);
  CHECK(warn.err.find("R(i,j,k)") != std::string::npos);

  auto res = sb.run("residual --id Htilde_pm --m 2 --p 1");
  CHECK(res.status == 0);
  CHECK(res.out.find("4*t^2 + 107") != std::string::npos);
  CHECK(res.out.find("(coprime)") != std::string::npos);

  auto o = sb.run("oracle --id A1 --m 2 --p 1 --t 0..2");
  CHECK(o.status == 0);
  CHECK(o.out.find("MISMATCH") == std::string::npos);

  auto reg = sb.run("registry");
  CHECK(reg.status == 0);
  CHECK(reg.out.find("\"schema\": 1") != std::string::npos);
}

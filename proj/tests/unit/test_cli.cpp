#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "plap/error.hpp"
#include "sweep.hpp"

namespace plapcli {
namespace {

namespace fs = std::filesystem;

const fs::path kConfigs = fs::path(PLAP_SOURCE_DIR) / "configs";

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct Cli {
  int code;
  std::string out, err;
};

Cli cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("plap_cli_" + std::to_string(counter_++))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

const char* kMinimal = R"(# comment line
p = 2
grid.n = 49   # trailing comment
f = u^3
cond.alpha = 4
init = sine: c=6
)";

TEST(Config, ParsesDefaultsAndRequiredKeys) {
  const auto c = parse_config(kMinimal);
  EXPECT_EQ(c.grid.dim, 1);
  EXPECT_EQ(c.grid.n, 49);
  EXPECT_EQ(c.f, "powersum: 1*u^3");
  EXPECT_EQ(c.init.kind, InitSpec::Kind::Sine);
  EXPECT_EQ(c.init.c, 6.0);
  EXPECT_EQ(c.solver.safety, 0.5);
}

TEST(Config, EmitParseRoundTrip) {
  for (const char* name : {"blowup_p2.cfg", "blowup_p3.cfg", "crossing_p2.cfg", "square_auto.cfg"}) {
    const auto c = load_config(kConfigs / name);
    const std::string text = emit_config(c);
    EXPECT_EQ(emit_config(parse_config(text)), text) << name;
  }
  auto c = parse_config(kMinimal);
  c.solver.safety = 0.1;
  c.cond.gamma = 1.0 / 3.0;
  c.init.mass_norm = true;
  c.init.kind = InitSpec::Kind::Eigen;
  c.output = "out dir";
  const std::string text = emit_config(c);
  EXPECT_EQ(emit_config(parse_config(text)), text);
  EXPECT_EQ(parse_config(text).cond.gamma, 1.0 / 3.0);
}

TEST(Config, NormalizesText) {
  const auto a = parse_config("p=2\ngrid.n=49\nf=powersum:   1*u^3\ncond.alpha=4.0\ninit=sine:c=6\n");
  const auto b = parse_config(kMinimal);
  EXPECT_EQ(emit_config(a), emit_config(b));
  EXPECT_EQ(config_hash(a), config_hash(b));
}

TEST(Config, HashIgnoresOutputAndTracksContent) {
  auto a = parse_config(kMinimal);
  auto b = a;
  b.output = "/elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.init.c = 7.0;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Config, RejectsBadInput) {
  const std::string base = kMinimal;
  for (const std::string bad :
       {base + "p = 3\n", base + "colour = red\n", base + "grid.dim = 3\n",
        base + "solver.safety = 0\n", base + "init.c = x\n", base + "solver.scheme = rk4\n",
        std::string("p = 2\ngrid.n = 9\nf = u^3\ncond.alpha = 4\n"),
        std::string("p = 2\ngrid.n = 9\nf = u^3\ninit = sine: c=1\n"),
        base + "just words\n", base + "cond.tag = D\n"})
    EXPECT_THROW(parse_config(bad), plap::ConfigError) << bad;
  EXPECT_THROW(parse_config("p = 1\ngrid.n = 9\nf = u\ncond.alpha = 4\ninit = sine: c=1\n"),
               plap::ConfigError);
  EXPECT_THROW(load_config("/nonexistent/x.cfg"), plap::ConfigError);
}

TEST(Config, SetKeyShortcuts) {
  auto c = load_config(kConfigs / "crossing_p2.cfg");
  set_key(c, "f.c", "1.1");
  EXPECT_EQ(c.f, "eigscaled: c=1.1000000000000001");
  set_key(c, "init.c", "2");
  EXPECT_EQ(c.init.c, 2.0);
  auto d = parse_config(kMinimal);
  EXPECT_THROW(set_key(d, "f.c", "2"), plap::ConfigError);
}

TEST(Domain, Parses) {
  const auto a = parse_domain("1:1:999");
  EXPECT_EQ(a.dim, 1);
  EXPECT_EQ(a.n, 999);
  const auto b = parse_domain("2:1x2:49");
  EXPECT_EQ(b.ly, 2.0);
  EXPECT_THROW(parse_domain("1:1"), plap::ConfigError);
  EXPECT_THROW(parse_domain("3:1:9"), plap::ConfigError);
}

TEST(Axis, ListsAndRanges) {
  const auto a = parse_axis("init.c=1..4");
  EXPECT_EQ(a.values, (std::vector<std::string>{"1", "2", "3", "4"}));
  EXPECT_EQ(parse_axis("f.c = 0.5, 1").values.size(), 2u);
  EXPECT_THROW(parse_axis("init.c="), plap::ConfigError);
  EXPECT_THROW(parse_axis("init.c=3..1"), plap::ConfigError);
}

TEST(Commands, EigPrintsLambda) {
  const auto r = cli({"eig", "--dim", "1", "--L", "1", "--n", "999", "--p", "2"});
  EXPECT_EQ(r.code, kOk);
  std::istringstream is(r.out);
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  EXPECT_EQ(header, "lambda,p,n,residual,iterations");
  EXPECT_NEAR(std::stod(row.substr(0, row.find(','))), 9.8696, 1e-2);
}

TEST(Commands, CheckAutoOnUnitInterval) {
  const auto r = cli({"check", "--f", "powersum: 1*u^2", "--p", "2", "--cond", "C", "--auto",
                      "--domain", "1:1:999"});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("C_p,yes"), std::string::npos);
}

TEST(Commands, CheckExitCodes) {
  EXPECT_EQ(cli({"check", "--f", "u^3", "--cond", "A", "--alpha", "4"}).code, 0);
  EXPECT_EQ(cli({"check", "--f", "u^3", "--cond", "A", "--alpha", "5"}).code, 1);
  const auto table = TempDir();
  {
    std::ofstream os(table.path() / "t.csv");
    os << "0,0\n1,1\n2,8\n3,27\n4,64\n";
  }
  // Tabulated sources never get an exact certificate.
  EXPECT_EQ(cli({"check", "--f", "table: " + (table.path() / "t.csv").string(), "--cond", "B",
                 "--alpha", "2.2", "--gamma", "1", "--u-max", "4"})
                .code,
            2);
  const auto bad = cli({"check", "--f", "u^3", "--cond", "A", "--alpha", "4", "--beta", "1"});
  EXPECT_EQ(bad.code, kConfigError);
  EXPECT_FALSE(bad.err.empty());
  EXPECT_EQ(cli({"check", "--f", "u^^3", "--cond", "A", "--alpha", "4"}).code, kConfigError);
}

TEST(Commands, MissingConfigIsConfigError) {
  const auto r = cli({"simulate", "--config", "missing.cfg"});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("missing.cfg"), std::string::npos);
  EXPECT_EQ(cli({"simulate"}).code, kConfigError);
  EXPECT_EQ(cli({}).code, kConfigError);
}

TEST(Commands, SimulateIsReproducible) {
  const TempDir a, b;
  const auto cfg = (kConfigs / "blowup_p2.cfg").string();
  const auto ra = cli({"simulate", "--config", cfg, "--out", a.path().string()});
  const auto rb = cli({"simulate", "--config", cfg, "--out", b.path().string()});
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(rb.code, 0) << rb.err;
  const fs::path da = fs::path(ra.out.substr(0, ra.out.size() - 1));
  const fs::path db = fs::path(rb.out.substr(0, rb.out.size() - 1));
  EXPECT_EQ(da.filename(), db.filename());
  for (const char* f : {"run.csv", "events.csv", "summary.csv", "final.csv", "config.cfg"})
    EXPECT_EQ(slurp(da / f), slurp(db / f)) << f;
  EXPECT_EQ(slurp(da / "summary.csv").find("BlownUp"), slurp(da / "summary.csv").find('\n') + 1);
}

TEST(Commands, BoundAndReport) {
  const auto cfg = (kConfigs / "blowup_p2.cfg").string();
  const auto b = cli({"bound", "--config", cfg});
  EXPECT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(b.out.substr(0, b.out.find('\n')), "J0,u0_l2sq,sigma,M,Tstar_upper,M_alt,Tstar_upper_alt");
  const auto r = cli({"report", "--config", cfg});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,supnorm,J,I,Iprime,Idoubleprime,H,residual");
  EXPECT_GT(std::count(r.out.begin(), r.out.end(), '\n'), 10);
}

TEST(Commands, BoundFailsWithoutPositiveEnergy) {
  const TempDir d;
  auto c = load_config(kConfigs / "blowup_p2.cfg");
  c.init.c = 4.0;
  {
    std::ofstream os(d.path() / "c4.cfg");
    os << emit_config(c);
  }
  EXPECT_EQ(cli({"bound", "--config", (d.path() / "c4.cfg").string()}).code, kNotSatisfied);
}

TEST(Sweep, CrossingAtEigenvalue) {
  const auto base = load_config(kConfigs / "crossing_p2.cfg");
  SweepOptions opt;
  opt.simulate = false;
  const auto rows = run_sweep(base, {parse_axis("f.c=0.8,0.9,1.0,1.1,1.2")}, opt);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[2].verdict, "yes");
  EXPECT_EQ(rows[3].verdict, "no");
  for (int k = 0; k < 3; ++k) EXPECT_EQ(rows[k].verdict, "yes");
  for (int k = 3; k < 5; ++k) EXPECT_EQ(rows[k].verdict, "no");
}

TEST(Sweep, EnergyChangesSignOnce) {
  const auto base = load_config(kConfigs / "blowup_p2.cfg");
  SweepOptions opt;
  opt.simulate = false;
  const auto rows = run_sweep(base, {parse_axis("init.c=1..10")}, opt);
  int changes = 0;
  for (std::size_t k = 1; k < rows.size(); ++k)
    if ((rows[k].J0 > 0) != (rows[k - 1].J0 > 0)) ++changes;
  EXPECT_EQ(changes, 1);
  EXPECT_LT(rows.front().J0, 0.0);
  EXPECT_GT(rows.back().J0, 0.0);
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
  const auto base = load_config(kConfigs / "blowup_p2.cfg");
  const std::vector<Axis> axes{parse_axis("init.c=6,8"), parse_axis("solver.safety=0.05,0.1")};
  std::ostringstream one, many;
  SweepOptions opt;
  opt.jobs = 1;
  write_sweep_csv(one, axes, run_sweep(base, axes, opt));
  opt.jobs = 4;
  write_sweep_csv(many, axes, run_sweep(base, axes, opt));
  EXPECT_EQ(one.str(), many.str());
  EXPECT_NE(one.str().find("6,0.05,yes"), std::string::npos);
}

TEST(Sweep, EmptyAxesGiveOneRunAndCapApplies) {
  const auto base = load_config(kConfigs / "blowup_p2.cfg");
  SweepOptions opt;
  opt.simulate = false;
  EXPECT_EQ(run_sweep(base, {}, opt).size(), 1u);
  opt.max_runs = 5;
  EXPECT_THROW(run_sweep(base, {parse_axis("init.c=1..10")}, opt), plap::ConfigError);
  EXPECT_THROW(run_sweep(base, {parse_axis("colour=1,2")}, opt), plap::ConfigError);
}

TEST(Sweep, RowFailuresAreRecorded) {
  const auto base = load_config(kConfigs / "blowup_p2.cfg");
  SweepOptions opt;
  opt.simulate = false;
  const auto rows = run_sweep(base, {parse_axis("grid.n=49,1")}, opt);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].error.empty());
}

}  // namespace
}  // namespace plapcli

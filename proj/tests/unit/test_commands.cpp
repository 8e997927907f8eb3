#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgsc/commands.hpp"
#include "cgsc/conv_op.hpp"
#include "cgsc/error.hpp"
#include "cgsc/tensor_io.hpp"
#include "support/oracles.hpp"

using namespace cgsc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cgsc_commands_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunConfig synth_config(const fs::path& out, std::uint64_t seed) {
  RunConfig cfg;
  cfg.set("out", out.string());
  cfg.set("seed", std::to_string(seed));
  cfg.set("rows", "16");
  cfg.set("cols", "16");
  cfg.set("k", "3");
  cfg.set("n_sources", "4");
  cfg.set("min_separation", "5");
  cfg.set("kernel_size", "5");
  return cfg;
}

std::vector<std::string> csv_lines(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST_CASE("config parsing") {
  const fs::path dir = fresh_dir("config");
  std::ofstream(dir / "a.cfg") << "# comment\nlambda = 0.5\n\n  max_iters=10  # trailing\nout=x\n";
  RunConfig cfg;
  cfg.load_file(dir / "a.cfg");
  CHECK(cfg.get_double("lambda", 0.0) == 0.5);
  CHECK(cfg.get_int("max_iters", 0) == 10);
  cfg.apply_override("lambda=0.25");
  CHECK(cfg.get_double("lambda", 0.0) == 0.25);
  CHECK(cfg.get_bool("enforce_norm_bound", true));
  CHECK_THROWS_AS(cfg.set("lamda", "1"), Error);
  cfg.set("max_iters", "ten");
  CHECK_THROWS_AS(cfg.get_int("max_iters", 0), Error);
  std::ofstream(dir / "b.cfg") << "just words\n";
  CHECK_THROWS_AS(cfg.load_file(dir / "b.cfg"), Error);
  CHECK_THROWS_AS(cfg.load_file(dir / "missing.cfg"), Error);
}

TEST_CASE("synth output is reproducible and self-consistent") {
  const fs::path a = fresh_dir("synth_a"), b = fresh_dir("synth_b");
  RunConfig ca = synth_config(a, 31), cb = synth_config(b, 31);
  cmd_synth(ca);
  cmd_synth(cb);
  for (const char* f : {"s.cgt", "w.cgt", "x_true.cgt", "y.cgt", "alphas.cgt", "kernels.cgt", "sources.csv"}) {
    CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
  }
  // noiseless: s is exactly forward(kernels, x_true)
  const KernelDictionary dict = dictionary_from(read_tensor(a / "kernels.cgt"));
  const FeatureStack x = stack_from(read_tensor(a / "x_true.cgt"));
  CHECK(forward(dict, x) == image_from(read_tensor(a / "s.cgt")));
  CHECK(read_sources_csv(a / "sources.csv").size() == 4);
}

TEST_CASE("synth without a seed draws one and records it") {
  const fs::path dir = fresh_dir("synth_seed");
  RunConfig cfg = synth_config(dir, 0);
  RunConfig unseeded;
  for (const auto& [k, v] : cfg.entries())
    if (k != "seed") unseeded.set(k, v);
  const auto sum = cmd_synth(unseeded);
  CHECK(unseeded.get_u64("seed", 0) == sum.seed);
}

TEST_CASE("synth with no sources is noise only") {
  const fs::path dir = fresh_dir("synth_empty");
  RunConfig cfg = synth_config(dir, 2);
  cfg.set("n_sources", "0");
  cfg.set("noise_sigma", "0.1");
  cmd_synth(cfg);
  CHECK(csv_lines(dir / "sources.csv") == std::vector<std::string>{"i,j,amplitude"});
  CHECK(image_from(read_tensor(dir / "s.cgt")).max_abs() > 0.0);
  CHECK(stack_from(read_tensor(dir / "x_true.cgt")).values() == std::vector<double>(3 * 256, 0.0));
}

TEST_CASE("solve then eval") {
  const fs::path data = fresh_dir("pipeline_data"), out = fresh_dir("pipeline_out");
  RunConfig sc = synth_config(data, 8);
  cmd_synth(sc);

  RunConfig cfg;
  cfg.set("data", data.string());
  cfg.set("out", out.string());
  cfg.set("lambda", "1e-5");
  cfg.set("max_iters", "3000");
  cfg.set("groups", "singleton");
  const auto sum = cmd_solve(cfg);
  CHECK(sum.iterations > 0);
  for (const char* f : {"x_hat.cgt", "y_hat.cgt", "alpha_hat.cgt", "trace.csv"}) CHECK(fs::exists(out / f));

  const auto lines = csv_lines(out / "trace.csv");
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "iter,objective,fidelity,regularizer,iterate_change");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    double it, obj, fid, reg, chg;
    char c;
    std::istringstream row(lines[i]);
    row >> it >> c >> obj >> c >> fid >> c >> reg >> c >> chg;
    CHECK(std::abs(obj - (fid + reg)) <= 1e-9 * std::max(1.0, std::abs(obj)));
  }

  const auto ev = cmd_eval(cfg);
  CHECK(ev.recon.support_iou >= 0.99);
  CHECK(ev.localization.f1 == 1.0);
  const auto report = csv_lines(out / "eval.csv");
  REQUIRE(report.size() == 2);
  CHECK(report[0] == kEvalCsvHeader);
}

TEST_CASE("eval of the truth against itself and of a zero stack") {
  const fs::path data = fresh_dir("eval_data");
  RunConfig sc = synth_config(data, 5);
  cmd_synth(sc);

  RunConfig cfg;
  cfg.set("data", data.string());
  cfg.set("x_hat", (data / "x_true.cgt").string());
  cfg.set("report", (data / "self.csv").string());
  const auto self = cmd_eval(cfg);
  CHECK(self.recon.rel_l2 == 0.0);
  CHECK(self.localization.f1 == 1.0);

  write_tensor(data / "zero.cgt", to_tensor(FeatureStack(3, 16, 16)));
  cfg.set("x_hat", (data / "zero.cgt").string());
  cfg.set("report", (data / "zero.csv").string());
  const auto zero = cmd_eval(cfg);
  CHECK(zero.localization.recall == 0.0);
  // golden row for the zero stack with the default thresholds
  CHECK(csv_lines(data / "zero.csv") ==
        std::vector<std::string>{kEvalCsvHeader, "1,0,0,0,0,0,0,2,1"});
}

TEST_CASE("solve failures") {
  const fs::path data = fresh_dir("fail_data");
  RunConfig sc = synth_config(data, 6);
  cmd_synth(sc);
  RunConfig cfg;
  cfg.set("s", (data / "s.cgt").string());
  cfg.set("kernels", (data / "nope.cgt").string());
  try {
    cmd_solve(cfg);
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoFailure);
  }
  cfg.set("kernels", (data / "kernels.cgt").string());
  cfg.set("groups", "hexagons");
  CHECK_THROWS_AS(cmd_solve(cfg), Error);
}

TEST_CASE("group specs") {
  CHECK(build_groups("singleton", "", 3, 3, 2).group_count() == 18);
  CHECK(build_groups("across-k", "", 3, 3, 2).group_count() == 9);
  CHECK(build_groups("tiles:2,2", "", 4, 4, 3).group_count() == 4);
  CHECK(build_groups("tiles:2,2", "1,2;3", 4, 4, 3).group_count() == 8);
  CHECK_THROWS_AS(build_groups("tiles:2", "", 4, 4, 3), Error);

  const fs::path dir = fresh_dir("labels");
  write_labels(dir / "g.cgl", LabelTensor{{1, 2, 2}, {7, 7, 0, 3}});
  const auto g = build_groups("file:" + (dir / "g.cgl").string(), "", 1, 2, 2);
  CHECK(g.group_count() == 2);
  CHECK_THROWS_AS(build_groups("file:" + (dir / "g.cgl").string(), "", 2, 2, 2), Error);
}

TEST_CASE("norm-check") {
  const fs::path data = fresh_dir("norm_data");
  RunConfig sc = synth_config(data, 3);
  cmd_synth(sc);
  RunConfig cfg;
  cfg.set("data", data.string());
  const auto sum = cmd_norm_check(cfg);
  CHECK(sum.normalized);
  CHECK(sum.estimate.value > 0.0);
  CHECK(sum.estimate.value <= 1.0 + 1e-9);
}

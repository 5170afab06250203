#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "twctv/cli.hpp"
#include "twctv/image_io.hpp"
#include "twctv/tensor_io.hpp"

using namespace twctv;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("twctv");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(int(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("twctv_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int count_lines(const std::string& path) {
  std::ifstream is(path);
  int n = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_CASE("cli synth then complete round trip") {
  TempDir tmp;
  CHECK(run_cli({"synth", "--shape", "20,20,10", "--rank", "2", "--seed", "5", "--out",
                 tmp.file("m.tlt")}) == 0);
  const Tensor m = read_tensor(tmp.file("m.tlt"));
  CHECK(m.shape() == Shape{20, 20, 10});

  CHECK(run_cli({"complete", "--in", tmp.file("m.tlt"), "--sampling-rate", "0.6", "--transform", "dct",
                 "--seed", "3", "--out", tmp.file("x.tlt"), "--history", tmp.file("h.csv"),
                 "--manifest", tmp.file("run.json")}) == 0);

  nlohmann::json manifest;
  std::ifstream(tmp.file("run.json")) >> manifest;
  CHECK(manifest["converged"].get<bool>());
  CHECK(manifest["metrics"]["relative_error"].get<double>() < 1e-4);
  CHECK(manifest["config"]["lambda_resolved"].get<double>() > 0.0);
  CHECK(manifest["inputs"][0]["digest"].get<std::string>().substr(0, 8) == "fnv1a64:");

  // history rows = iterations, plus a header line
  CHECK(count_lines(tmp.file("h.csv")) == manifest["iterations"].get<int>() + 1);
  std::ifstream hs(tmp.file("h.csv"));
  std::string header;
  std::getline(hs, header);
  CHECK(header.substr(0, 37) == "t,dx_inf,de_inf,feas_inf,mu,seconds,d");
}

TEST_CASE("cli replay is bitwise reproducible") {
  TempDir tmp;
  REQUIRE(run_cli({"synth", "--shape", "12,12,4", "--rank", "2", "--seed", "9", "--out",
                   tmp.file("m.tlt")}) == 0);
  const std::vector<std::string> solve_args = {
      "complete", "--in", tmp.file("m.tlt"), "--sampling-rate", "0.5", "--seed", "11",
      "--deterministic", "--max-iters", "80", "--out", ""};
  auto args_a = solve_args;
  args_a.back() = tmp.file("a.tlt");
  auto args_b = solve_args;
  args_b.back() = tmp.file("b.tlt");
  const int code_a = run_cli(args_a);
  const int code_b = run_cli(args_b);
  CHECK(code_a == code_b);
  const Tensor a = read_tensor(tmp.file("a.tlt"));
  const Tensor b = read_tensor(tmp.file("b.tlt"));
  CHECK(std::memcmp(a.data(), b.data(), size_t(a.numel()) * 8) == 0);
}

TEST_CASE("cli metrics on identical tensors flags infinite psnr") {
  TempDir tmp;
  REQUIRE(run_cli({"synth", "--shape", "8,8,4", "--rank", "1", "--out", tmp.file("a.tlt")}) == 0);
  std::ostringstream captured;
  auto* old = std::cout.rdbuf(captured.rdbuf());
  const int code = run_cli({"metrics", "--ref", tmp.file("a.tlt"), "--est", tmp.file("a.tlt")});
  std::cout.rdbuf(old);
  CHECK(code == 0);
  const nlohmann::json out = nlohmann::json::parse(captured.str());
  CHECK(out["relative_error"].get<double>() == 0.0);
  CHECK(out["psnr_infinite"].get<bool>());
}

TEST_CASE("cli exit codes") {
  TempDir tmp;
  CHECK(run_cli({"complete", "--bogus-flag"}) == 2);               // unknown flag
  CHECK(run_cli({"synth", "--rank", "2", "--out", tmp.file("s.tlt"), "--shape", "oops"}) == 2);
  CHECK(run_cli({"complete", "--in", tmp.file("none.tlt"), "--sampling-rate", "0.5", "--out",
                 tmp.file("o.tlt")}) == 3);                        // missing input
  REQUIRE(run_cli({"synth", "--shape", "10,10,4", "--rank", "2", "--out", tmp.file("m.tlt")}) == 0);
  CHECK(run_cli({"rpca", "--in", tmp.file("m.tlt"), "--mask", tmp.file("m.tlt"), "--out",
                 tmp.file("o.tlt")}) == 2);                        // rpca refuses masks
  CHECK(run_cli({"complete", "--in", tmp.file("m.tlt"), "--out", tmp.file("o.tlt")}) == 2);
  // iteration cap: result still written, exit code 5
  CHECK(run_cli({"complete", "--in", tmp.file("m.tlt"), "--sampling-rate", "0.5", "--max-iters", "2",
                 "--out", tmp.file("capped.tlt")}) == 5);
  CHECK(fs::exists(tmp.file("capped.tlt")));
  CHECK(fs::exists(tmp.file("capped.tlt") + ".manifest.json"));
}

TEST_CASE("cli foreground pipeline") {
  TempDir tmp;
  // sparse tensor with a 10x10 block in each frame
  Tensor e({24, 24, 3});
  Tensor truth({24, 24, 3});
  for (int64_t f = 0; f < 3; ++f)
    for (int64_t i = 6; i < 16; ++i)
      for (int64_t j = 6; j < 16; ++j) {
        e[(i * 24 + j) * 3 + f] = 4.0;
        truth[(i * 24 + j) * 3 + f] = 1.0;
      }
  write_tensor(tmp.file("e.tlt"), e);
  write_tensor(tmp.file("truth.tlt"), truth);
  std::ostringstream captured;
  auto* old = std::cout.rdbuf(captured.rdbuf());
  const int code = run_cli({"foreground", "--in", tmp.file("e.tlt"), "--out", tmp.file("mask.tlt"),
                            "--truth", tmp.file("truth.tlt")});
  std::cout.rdbuf(old);
  CHECK(code == 0);
  const nlohmann::json out = nlohmann::json::parse(captured.str());
  CHECK(out["f_measure"].get<double>() >= 0.9);
  const Tensor mask = read_tensor(tmp.file("mask.tlt"));
  for (int64_t i = 0; i < mask.numel(); ++i) CHECK((mask[i] == 0.0 || mask[i] == 1.0));
}

TEST_CASE("cli rpca denoises a png image end to end") {
  TempDir tmp;
  // smooth ramp image
  Tensor img({24, 24, 3});
  for (int64_t i = 0; i < 24; ++i)
    for (int64_t j = 0; j < 24; ++j)
      for (int64_t c = 0; c < 3; ++c)
        img[(i * 24 + j) * 3 + c] = 0.2 + 0.5 * double(i) / 23.0 + 0.1 * double(c);
  // write via the library, then drive everything through the cli
  write_image(tmp.file("img.png"), img);
  const int code = run_cli({"rpca", "--in", tmp.file("img.png"), "--noise-level", "0.1", "--seed", "2",
                            "--out", tmp.file("rec.png"), "--manifest", tmp.file("rpca.json")});
  CHECK(code == 0);
  nlohmann::json manifest;
  std::ifstream(tmp.file("rpca.json")) >> manifest;
  const double rec_psnr = manifest["metrics"]["psnr_db"].get<double>();
  const double noisy_psnr = manifest["observed_metrics"]["psnr_db"].get<double>();
  CHECK(rec_psnr > noisy_psnr + 6.0);
}

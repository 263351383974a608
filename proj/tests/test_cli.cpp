#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + SUPPEST_BIN + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path write_temp(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "suppest_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << body;
  return p;
}

}  // namespace

TEST_CASE("help lists flags with their defaults") {
  const Run top = run("--help");
  CHECK(top.code == 0);
  for (const char* sub : {"estimate", "coeffs", "simulate", "converge", "bias-curve"})
    CHECK(top.out.find(sub) != std::string::npos);
  const Run est = run("estimate --help");
  CHECK(est.code == 0);
  for (const char* flag : {"--c0", "0.558", "--c1", "0.5", "--s", "1000", "--tol", "--max-iter",
                           "--k", "--clamp", "--fallback", "--counts", "--estimator", "--format"})
    CHECK(est.out.find(flag) != std::string::npos);
  const Run sim = run("simulate --help");
  for (const char* flag : {"--threads", "--seed", "--trials", "--normalization", "--min-mass",
                           "--n-frac", "--dist", "--record-runtime"})
    CHECK(sim.out.find(flag) != std::string::npos);
}

TEST_CASE("estimate from a counts file") {
  const auto f = write_temp("two.tsv", "a\t2\nb\t1\n");
  const Run r = run("estimate --counts " + f.string() + " --estimator naive --format csv");
  CHECK(r.code == 0);
  CHECK(r.out == "estimator,value,clamped\nnaive,2,false\n");
}

TEST_CASE("k defaults to n and says so") {
  const auto f = write_temp("text.txt", "the whale the sea a whale the end\n");
  const Run r = run("estimate " + f.string() + " --estimator naive,gt");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"k_source\": \"default\"") != std::string::npos);
  CHECK(r.out.find("\"n\": 8") != std::string::npos);
  CHECK(r.out.find("\"k\": 8.0") != std::string::npos);
  const Run given = run("estimate " + f.string() + " --estimator naive --k 100");
  CHECK(given.out.find("\"k_source\": \"flag\"") != std::string::npos);
}

TEST_CASE("zero coverage exits 2 unless falling back") {
  const auto f = write_temp("singles.tsv", "a\t1\nb\t1\nc\t1\n");
  CHECK(run("estimate --counts " + f.string() + " --estimator gt").code == 2);
  const Run fb = run("estimate --counts " + f.string() + " --estimator gt --fallback --format csv");
  CHECK(fb.code == 0);
  CHECK(fb.out == "estimator,value,clamped\ngt,3,false\n");
}

TEST_CASE("clamp keeps estimates within [distinct, k]") {
  const auto f = write_temp("clamp.tsv", "a\t1\nb\t1\nc\t1\nd\t5\n");
  const Run r = run("estimate --counts " + f.string() + " --estimator gt --k 5 --clamp --format csv");
  CHECK(r.code == 0);
  // GT gives 4 * 8 / 5 = 6.4, clamped to k = 5.
  CHECK(r.out == "estimator,value,clamped\ngt,5,true\n");
}

TEST_CASE("input errors exit 1") {
  const auto bad = write_temp("bad.tsv", "a\tzero\n");
  CHECK(run("estimate --counts " + bad.string()).code == 1);
  CHECK(run("estimate /nonexistent/file").code == 1);
  CHECK(run("estimate --counts " + bad.string() + " --s 0").code == 1);
  CHECK(run("estimate --counts " + bad.string() + " --c0 -1").code == 1);
  CHECK(run("simulate --bogus").code == 1);
  CHECK(run("simulate --estimator pjw --trials 1").code == 1);
  CHECK(run("").code == 1);
  const auto utf = write_temp("bad.txt", "ok \xFF");
  CHECK(run("estimate " + utf.string()).code == 1);
}

TEST_CASE("coeffs") {
  const Run wy = run("coeffs --k 1e6 --n 1e6 --estimator wy");
  CHECK(wy.code == 0);
  CHECK(wy.out.find("\"degree\": 7") != std::string::npos);
  CHECK(wy.out.find("\"hi\": 6.907755278982137") != std::string::npos);
  const Run rwc = run("coeffs --k 1e6 --n 1e6 --estimator rwc");
  CHECK(rwc.code == 0);
  CHECK(rwc.out.find("\"duality_gap\"") != std::string::npos);
  CHECK(rwc.out.find("\"grid_points\": 1000") != std::string::npos);
  CHECK(run("coeffs --k 2 --n 100 --estimator wy").code == 1);
  CHECK(run("coeffs --k 1e4 --n 1e4 --estimator rwc-s").code == 1);
  CHECK(run("coeffs --k 1e4 --n 1e4 --estimator rwc-s --s-count 500").code == 0);
  CHECK(run("coeffs --k 1e6 --n 1e6 --estimator rwc --max-iter 2 --tol 1e-14").code == 2);
}

TEST_CASE("simulate is byte-reproducible and thread-independent") {
  const std::string args = "simulate --dist uniform,zipf:1 --min-mass 1e-3 --trials 3 --seed 7";
  const Run a = run(args), b = run(args), c = run(args + " --threads 3"),
            d = run(args, "SUPPEST_THREADS=2");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out == d.out);
  CHECK(a.out.rfind("estimator,distribution,n,trials,mean,std,mse,normalization", 0) == 0);
  // header + 5 estimators x 2 distributions
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 11);
  CHECK(run(args, "SUPPEST_THREADS=zero").code == 1);
}

TEST_CASE("simulate normalization and worst case") {
  const Run s2 = run("simulate --dist uniform --min-mass 1e-2 --trials 2 --seed 7 --normalization s2");
  CHECK(s2.out.find(",s2,") != std::string::npos);
  const Run worst = run("simulate --min-mass 1e-2 --trials 2 --seed 7 --worst-case");
  CHECK(worst.code == 0);
  CHECK(worst.out.rfind("estimator,size_index,worst_normalized_mse,worst_distribution,status\n", 0) == 0);
  const Run js = run("simulate --dist uniform --min-mass 1e-2 --trials 2 --format json");
  CHECK(js.out.find("\"prng\": \"mt19937_64/seed_seq/v1\"") != std::string::npos);
}

TEST_CASE("simulate exits 2 when every row fails") {
  CHECK(run("simulate --dist uniform --min-mass 1e-4 --n 2 --trials 1 --estimator gt").code == 2);
}

TEST_CASE("converge") {
  const Run r = run("converge --k 1e4 --n 1e4");
  CHECK(r.code == 0);
  CHECK(r.out.find("# fitted_exponent,") != std::string::npos);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 8);
  const Run one = run("converge --k 1e4 --n 1e4 --s-list 11");
  CHECK(one.code == 0);
  CHECK(one.out.find("fitted_exponent") == std::string::npos);
  CHECK(run("converge --s-list 11,20").code == 1);
}

TEST_CASE("bias-curve") {
  const Run r = run("bias-curve --k 1e4 --n 1e4 --estimator wy --points 50");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("lambda,bias,variance,g\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 51);
  CHECK(run("bias-curve --k 1e4 --n 1e4 --estimator gt").code == 1);
  CHECK(run("bias-curve --points 1").code == 1);
}

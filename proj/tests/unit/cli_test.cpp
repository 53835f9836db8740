#include "zetamoments/io.hpp"
#include "zetamoments/moments.hpp"
#include "zetamoments/predictions.hpp"
#include "zetamoments/zeros.hpp"

#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace cli = zm::cli;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "zetamoments");
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& line : zm::io::split(text, '\n')) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == cli::kExitError);
  CHECK(run({"bogus"}).code == cli::kExitError);
  CHECK(run({"moments", "--two-k", "2"}).code == cli::kExitError);  // no zero input
  const auto full = run({"predict", "--mode", "full", "--k", "3", "--range", "14", "50"});
  CHECK(full.code == cli::kExitError);
  CHECK(full.err.find("unavailable") != std::string::npos);
  CHECK(run({"--help"}).code == cli::kExitClean);
}

TEST_CASE("leading-term table") {
  const auto r = run({"predict", "--mode", "leading", "--height", "1.30664344087953251142539323425414e22"});
  REQUIRE(r.code == cli::kExitClean);
  CHECK(r.out.find("# tool=zetamoments " + zm::io::library_version()) == 0);
  const auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 7);
  std::istringstream row(rows[1]);
  double two_k = 0, value = 0;
  row >> two_k >> value;
  CHECK(two_k == 2);
  CHECK(zm::testing::matches_printed(value, 5.09e1, 3));
}

TEST_CASE("zeros then moments: the 2k = 0 moment is the covered length") {
  zm::testing::ScratchDir dir("cli");
  const std::string z = (dir / "z.txt").string(), b = (dir / "b.txt").string();
  REQUIRE(run({"zeros", "--range", "10", "50", "--out", z}).code == cli::kExitClean);
  const auto zeros = zm::read_zero_file(z);
  REQUIRE(zeros.size() == 10);
  REQUIRE(run({"moments", "--zero-file", z, "--two-k", "0,2", "--block-size", "3", "--out", b}).code ==
          cli::kExitClean);
  const auto file = zm::moments::read_block_file(b);
  REQUIRE(file.records.size() == 3);
  double total = 0;
  for (const auto& r : file.records) total += r.moments.at(0);
  CHECK(total == doctest::Approx(zeros.offsets.back() - zeros.offsets.front()).epsilon(1e-12));

  SUBCASE("provenance header and resolved config") {
    const auto text = zm::io::read_text(b);
    CHECK(text.find("# input z.txt sha256=" + zm::io::sha256_file(z)) != std::string::npos);
    const auto config = zm::io::read_text(b + ".config");
    CHECK(text.find("# config_sha256=" + zm::io::sha256_hex(config)) != std::string::npos);
  }
  SUBCASE("byte-identical reruns, independent of workers") {
    const std::string first_b = zm::io::read_text(b), first_z = zm::io::read_text(z);
    REQUIRE(run({"moments", "--zero-file", z, "--two-k", "0,2", "--block-size", "3", "--workers", "3", "--out", b})
                .code == cli::kExitClean);
    CHECK(zm::io::read_text(b) == first_b);
    REQUIRE(run({"zeros", "--range", "10", "50", "--workers", "2", "--out", z}).code == cli::kExitClean);
    CHECK(zm::io::read_text(z) == first_z);
  }
  SUBCASE("config file values yield to flags") {
    const std::string cfg = (dir / "run.cfg").string();
    zm::io::write_text(cfg, "two-k = 2\nblock-size = 3\n");
    const std::string b3 = (dir / "b3.txt").string();
    REQUIRE(run({"moments", "--config", cfg, "--zero-file", z, "--block-size", "9", "--out", b3}).code ==
            cli::kExitClean);
    const auto f = zm::moments::read_block_file(b3);
    REQUIRE(f.records.size() == 1);
    CHECK(f.records[0].count == 9);
    CHECK(f.records[0].moments.count(2) == 1);
    CHECK(f.records[0].moments.count(0) == 0);

    zm::io::write_text(cfg, "no-such-key = 1\n");
    CHECK(run({"moments", "--config", cfg, "--zero-file", z}).code == cli::kExitError);
  }
  SUBCASE("quality misses exit 2 with a flaw list") {
    const auto r = run({"moments", "--zero-file", z, "--two-k", "12", "--block-size", "9", "--romberg-cap", "5",
                        "--out", (dir / "bad.txt").string()});
    CHECK(r.code == cli::kExitFlaws);
    CHECK(r.err.find("not converged") != std::string::npos);
  }
}

TEST_CASE("self-ratio through the CLI") {
  zm::testing::ScratchDir dir("cli-ratio");
  const auto poly = zm::predict::polynomial_P(2);
  zm::moments::BlockFile f;
  f.base = "4000000";
  double alpha = 992103.5;
  for (int i = 0; i < 20; ++i) {
    zm::moments::BlockRecord r;
    r.first_index = 9'999'400 + 1000 * i;
    r.count = 1000;
    r.alpha = alpha;
    r.beta = alpha + 460.0 + i;
    r.moments[4] = zm::predict::prediction_integral(4e6L + r.alpha, 4e6L + r.beta, poly);
    r.errors[4] = 0.0;
    f.records.push_back(r);
    alpha = r.beta;
  }
  const std::string b = (dir / "p.txt").string();
  zm::moments::write_block_file(f, b);
  const auto r = run({"ratio", "--block-file", b, "--two-k", "4", "--group", "1,10"});
  REQUIRE(r.code == cli::kExitClean);
  const auto rows = data_lines(r.out);
  REQUIRE(rows.size() >= 2);
  std::istringstream whole(rows[1]);
  double two_k = 0, zeros = 0, ratio = 0;
  whole >> two_k >> zeros >> ratio;
  CHECK(ratio == doctest::Approx(1.0).epsilon(1e-6));
  for (std::size_t i = 3; i < rows.size(); ++i) {
    std::istringstream g(rows[i]);
    double k2, group, samples, mean, mn, mx, sd;
    g >> k2 >> group >> samples >> mean >> mn >> mx >> sd;
    CHECK(mn == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(mx == doctest::Approx(1.0).epsilon(1e-5));
  }
}

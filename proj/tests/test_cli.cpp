#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "latgeo/cli.hpp"
#include "latgeo/io.hpp"
#include "latgeo/measure.hpp"

using namespace latgeo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "latgeo_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Json load(const fs::path& p) { return Json::parse(read_text(p)); }

}  // namespace

TEST_CASE("boundary report matches the two-cell strip measure") {
  const auto dir = scratch("boundary");
  const auto path = dir / "b.json";
  const auto r = run({"boundary", "--m", "2", "--dim", "4", "--epsilon", "0.2", "--samples", "1000000",
                      "--seed", "7", "--out", path.string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("boundary") == 0);
  const Json j = load(path);
  CHECK(j["schema"] == "1");
  CHECK(j["seed"] == 7);
  const double strip = std::erf(0.2 / std::sqrt(2.0));  // 2 Phi(0.2) - 1
  const double se = binomial_standard_error(strip, 1'000'000);
  CHECK(std::abs(j["value"].get<double>() - strip) < 4 * se);
  CHECK(j["ci"][0].get<double>() <= strip);
  CHECK(j["ci"][1].get<double>() >= strip);
}

TEST_CASE("simplex frame file has unit sides after reload") {
  const auto dir = scratch("simplex");
  const auto path = dir / "frame.json";
  REQUIRE(run({"simplex", "--m", "4", "--dim", "3", "--side", "1", "--out", path.string()}).code == 0);
  const auto f = read_frame(path);
  CHECK(f.count() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      CHECK(std::abs(distance(f.direction(i), f.direction(j)) - 1.0) <= 1e-12);
}

TEST_CASE("self metrics give full coverage") {
  const auto dir = scratch("metrics");
  const auto real = dir / "real.csv";
  REQUIRE(run({"generate", "--m", "3", "--dim", "2", "--samples", "400", "--out", real.string()}).code == 0);
  const auto report = dir / "m.json";
  const auto r = run({"metrics", "--real", real.string(), "--fake", real.string(), "--k", "5", "--out", report.string()});
  REQUIRE(r.code == 0);
  const Json j = load(report);
  bool seen = false;
  for (const auto& rep : j["reports"])
    if (rep["metric"] == "coverage") {
      CHECK(rep["value"].get<double>() == 1.0);
      seen = true;
    }
  CHECK(seen);
}

TEST_CASE("generated samples round-trip and match the library") {
  const auto dir = scratch("roundtrip");
  write_text(dir / "modes.csv", "x0,x1\n0,0\n3,1\n-1,2.5\n");
  const auto out = dir / "fake.csv";
  REQUIRE(run({"generate", "--modes", (dir / "modes.csv").string(), "--dim", "3", "--L", "20",
               "--samples", "300", "--seed", "11", "--out", out.string()})
              .code == 0);
  const ModeSet modes = read_modes(dir / "modes.csv");
  const GeneratorStar g(equidistant_points(3, 3, 1.0), modes, epsilon_max(modes, 20.0), 20.0);
  const auto batch = generate_batch(g, 300, 11);
  const SampleSet back = read_samples(out, Provenance::fake);
  REQUIRE(back.size() == 300);
  REQUIRE(back.ambient_dim() == 2);
  CHECK(back.points() == batch.samples.points());
  CHECK(samples_to_csv(back) == read_text(out));
  const Json side = load(dir / "fake.json");
  CHECK(side["seed"] == 11);
  CHECK(side["n"] == 300);
  CHECK(side["L"].get<double>() == 20.0);
}

TEST_CASE("identical arguments give byte-identical artifacts") {
  const auto a = scratch("repro_a"), b = scratch("repro_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(run({"generate", "--m", "4", "--dim", "3", "--samples", "500", "--seed", "5", "--out",
                 (dir / "s.csv").string()})
                .code == 0);
    REQUIRE(run({"sandwich", "--m", "3", "--dim", "3", "--samples", "20000", "--seed", "5", "--out",
                 (dir / "w.json").string()})
                .code == 0);
    REQUIRE(run({"bounds", "--m", "3", "--dim", "8", "--format", "csv", "--out", (dir / "b.csv").string()}).code == 0);
  }
  for (const char* name : {"s.csv", "s.json", "w.json", "b.csv", "b.json"})
    CHECK(read_text(a / name) == read_text(b / name));
}

TEST_CASE("output directory comes from the environment") {
  const auto dir = scratch("env");
  ::setenv("LATGEO_OUT_DIR", dir.string().c_str(), 1);
  const auto r = run({"simplex", "--m", "3", "--dim", "2"});
  ::unsetenv("LATGEO_OUT_DIR");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "frame.json"));
}

TEST_CASE("configuration errors exit with 1 before any work") {
  const auto dir = scratch("config");
  auto expect = [&](std::vector<std::string> args, const std::string& fragment) {
    const auto r = run(std::move(args));
    CHECK(r.code == cli::kExitConfig);
    CHECK_MESSAGE(r.err.find(fragment) != std::string::npos, r.err);
  };
  expect({"boundary", "--m", "2", "--dim", "4", "--epsilon", "0.2", "--bogus"}, "--bogus");
  expect({"teleport"}, "teleport");
  expect({"boundary", "--m", "2", "--dim", "4"}, "--epsilon");
  expect({"boundary", "--m", "2", "--dim", "4", "--epsilon", "-1"}, "--epsilon");
  expect({"generate", "--m", "5", "--dim", "2"}, "--m");
  expect({"generate", "--m", "3", "--dim", "2", "--L", "0.5"}, "--L");
  expect({"generate", "--m", "3", "--dim", "2", "--epsilon-policy", "explicit"}, "--epsilon");
  expect({"generate", "--m", "3", "--dim", "2", "--L", "9", "--L-mult", "3"}, "mutually exclusive");
  expect({"boundary", "--m", "2", "--dim", "4", "--epsilon", "0.2", "--method", "fuzzy"}, "--method");
  expect({"sweep", "--m", "4", "--dims", "4,2"}, "--dims");
  CHECK(fs::is_empty(dir));
}

TEST_CASE("ingestion failures exit with 2 and name the problem") {
  const auto dir = scratch("ingest");
  write_text(dir / "good.csv", "1,2\n3,4\n5,6\n7,8\n");
  write_text(dir / "ragged.csv", "1,2\n3\n");
  write_text(dir / "words.csv", "1,2\n3,abc\n");
  write_text(dir / "wide.csv", "1,2,3\n4,5,6\n");
  write_text(dir / "empty.csv", "");
  auto expect = [&](const std::string& fake, const std::string& fragment) {
    const auto r = run({"metrics", "--real", (dir / "good.csv").string(), "--fake", fake, "--k", "1"});
    CHECK(r.code == cli::kExitRuntime);
    CHECK_MESSAGE(r.err.find(fragment) != std::string::npos, r.err);
  };
  expect((dir / "missing.csv").string(), "cannot open");
  expect((dir / "ragged.csv").string(), "ragged");
  expect((dir / "words.csv").string(), "non-numeric");
  expect((dir / "empty.csv").string(), "empty");
  expect((dir / "wide.csv").string(), "dimension mismatch");
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("sandwich") != std::string::npos);
}

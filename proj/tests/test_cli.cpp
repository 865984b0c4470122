#include <clickseg/cli.hpp>
#include <clickseg/image_io.hpp>
#include <clickseg/metrics.hpp>
#include <clickseg/weaklabel.hpp>

#include <doctest.h>
#include <json.hpp>

#include "test_support.hpp"

#include <fstream>
#include <sstream>

using namespace clickseg;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "clickseg");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct RingFiles {
  TempDir dir;
  TwoRingFixture fx;
  RingFiles(bool broken = false) : fx(broken) {
    io::write_image(fx.image, dir / "rings.pgm");
    std::ofstream(dir / "seeds.csv") << "# ring centres\n8,8\n22,22\n";
  }
  std::string path(const char* name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("fill writes the mask and reports each seed") {
  RingFiles f;
  auto r = run({"fill", "--image", f.path("rings.pgm"), "--seeds",
                f.path("seeds.csv"), "--closing-radius", "1", "--out",
                f.path("mask.png")});
  CHECK(r.code == 0);
  const std::vector<SeedPoint> seeds{{8, 8}, {22, 22}};
  const auto expected = floodfill_pipeline(f.fx.image, seeds, FloodFillParams{});
  CHECK(io::read_mask(f.dir / "mask.png") == expected.mask);
  CHECK(r.out.find("seed 0 8,8 FilledOk " +
                   std::to_string(expected.per_seed_regions[0].pixels)) !=
        std::string::npos);
  CHECK_FALSE(fs::exists(f.dir / "mask_step1_binary.png"));

  // Same input, same bytes.
  run({"fill", "--image", f.path("rings.pgm"), "--seeds", f.path("seeds.csv"),
       "--out", f.path("again.png")});
  CHECK(slurp(f.dir / "again.png") == slurp(f.dir / "mask.png"));
}

TEST_CASE("fill --debug-steps writes the four intermediates") {
  RingFiles f;
  auto r = run({"fill", "--image", f.path("rings.pgm"), "--seeds",
                f.path("seeds.csv"), "--out", f.path("mask.pgm"),
                "--debug-steps", "-q"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const auto stages = compute_barrier(f.fx.image, FloodFillParams{});
  CHECK(io::read_mask(f.dir / "mask_step1_binary.pgm") == stages.binary);
  CHECK(io::read_mask(f.dir / "mask_step2_skeleton.pgm") == stages.skeleton);
  CHECK(io::read_mask(f.dir / "mask_step3_closed.pgm") == stages.closed);
  CHECK(io::read_mask(f.dir / "mask_step4_filled.pgm") ==
        io::read_mask(f.dir / "mask.pgm"));
}

TEST_CASE("fill flags a leaking ring") {
  RingFiles f(/*broken=*/true);
  auto r = run({"fill", "--image", f.path("rings.pgm"), "--seeds",
                f.path("seeds.csv"), "--out", f.path("mask.png")});
  CHECK(r.code == 0);
  CHECK(r.out.find("seed 1 22,22 SuspectLeak") != std::string::npos);
}

TEST_CASE("domain errors exit 1 without partial output") {
  RingFiles f;
  std::ofstream(f.dir / "bad_seeds.csv") << "8,8\n40,2\n";
  auto r = run({"fill", "--image", f.path("rings.pgm"), "--seeds",
                f.path("bad_seeds.csv"), "--out", f.path("mask.png"),
                "--debug-steps"});
  CHECK(r.code == 1);
  CHECK(r.err.find("SeedOutOfBounds") != std::string::npos);
  CHECK(fs::directory_iterator(f.dir.path()) != fs::directory_iterator());
  for (const auto& e : fs::directory_iterator(f.dir.path()))
    CHECK(e.path().filename().string().find("mask") == std::string::npos);

  r = run({"fill", "--image", f.path("absent.pgm"), "--seeds",
           f.path("seeds.csv"), "--out", f.path("mask.png")});
  CHECK(r.code == 1);
  r = run({"fill", "--image", f.path("rings.pgm"), "--seeds",
           f.path("seeds.csv"), "--out", f.path("nodir/mask.png")});
  CHECK(r.code == 1);
  CHECK(run({"evaluate", "--pred", f.path("rings.pgm"), "--truth",
             f.path("rings.pgm"), "--format", "json"})
            .code == 0);
  io::write_mask(BinaryMask(3, 3), f.dir / "small.png");
  r = run({"evaluate", "--pred", f.path("rings.pgm"), "--truth",
           f.path("small.png")});
  CHECK(r.code == 1);
  CHECK(r.err.find("DimensionMismatch") != std::string::npos);
  CHECK(run({"grade", "--value", "1.5", "--scale", "fleiss"}).code == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"fill"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"fill", "--image", "a.pgm", "--seeds", "s", "--out", "m.png",
             "--closing-radius", "-1"})
            .code == 2);
  CHECK(run({"fill", "--image", "a.pgm", "--seeds", "s", "--out", "m.png",
             "--threshold", "300"})
            .code == 2);
  CHECK(run({"evaluate", "--format", "xml", "--from-rates", "0,0"}).code == 2);
  CHECK(run({"evaluate", "--from-rates", "0.5"}).code == 2);
  CHECK(run({"grade", "--value", "0.5", "--scale", "nope"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("rg writes the grown mask") {
  RingFiles f;
  auto r = run({"rg", "--image", f.path("rings.pgm"), "--seeds",
                f.path("seeds.csv"), "--stop-threshold", "5", "--out",
                f.path("rg.png")});
  CHECK(r.code == 0);
  CHECK(io::read_mask(f.dir / "rg.png") ==
        region_grow_all(f.fx.image, {{{8, 8}, {22, 22}}}, {5.0}).mask);
}

TEST_CASE("evaluate a prediction against itself") {
  RingFiles f;
  run({"fill", "--image", f.path("rings.pgm"), "--seeds", f.path("seeds.csv"),
       "--out", f.path("mask.png")});
  auto r = run({"evaluate", "--pred", f.path("mask.png"), "--truth",
                f.path("mask.png")});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["micro"]["acc"] == 1.0);
  CHECK(doc["micro"]["kap"] == 1.0);
  CHECK(doc["micro"]["auroc"] == 1.0);
  CHECK(doc["micro"]["auroc_grade"] == "excellent agreement (A)");
  CHECK(doc["images"][0]["image"] == "mask");

  r = run({"evaluate", "--pred", f.path("mask.png"), "--truth",
           f.path("mask.png"), "--format", "csv", "--out", f.path("r.csv")});
  CHECK(r.code == 0);
  CHECK(slurp(f.dir / "r.csv").rfind("image,tp,", 0) == 0);
}

TEST_CASE("evaluate directories pools counts") {
  TempDir dir;
  fs::create_directories(dir / "pred");
  fs::create_directories(dir / "truth");
  io::write_mask(mask_from_rows({"10", "10"}), dir / "pred" / "a.png");
  io::write_mask(mask_from_rows({"11", "00"}), dir / "truth" / "a.png");
  io::write_mask(BinaryMask(4, 4, 1), dir / "pred" / "b.png");
  io::write_mask(BinaryMask(4, 4, 1), dir / "truth" / "b.png");
  auto r = run({"evaluate", "--pred-dir", (dir / "pred").string(),
                "--truth-dir", (dir / "truth").string()});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["images"].size() == 2);
  CHECK(doc["micro"]["acc"].get<double>() == doctest::Approx(0.9));
}

TEST_CASE("evaluate --from-rates") {
  auto r = run({"evaluate", "--from-rates", "0.446302,0.003077",
                "--from-rates", "0.032981,0.036248"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.size() == 2);
  CHECK(doc[0]["auroc"].get<double>() == doctest::Approx(0.7753105).epsilon(1e-12));
  CHECK(doc[1]["auroc_grade"] == "excellent agreement (A)");
  r = run({"evaluate", "--from-rates", "0.9,0.9", "--format", "csv"});
  CHECK(r.out == "fnr,fpr,auroc,auroc_grade\n0.9,0.9,0.1,\"below scale\"\n");
}

TEST_CASE("grade") {
  auto r = run({"grade", "--value", "0.674656", "--scale", "all"});
  CHECK(r.code == 0);
  CHECK(r.out.find("landis-koch: substantial agreement") != std::string::npos);
  CHECK(r.out.find("fleiss: fair to good agreement") != std::string::npos);
  CHECK(r.out.find("traditional-auroc: poor agreement (D)") !=
        std::string::npos);
  r = run({"grade", "--value", "0.965385", "--scale", "auroc"});
  CHECK(r.out == "traditional-auroc: excellent agreement (A)\n");
}

TEST_CASE("augment a directory") {
  TempDir dir;
  fs::create_directories(dir / "img");
  fs::create_directories(dir / "lab");
  std::mt19937 rng(2);
  io::write_image(random_image(rng, 4, 4), dir / "img" / "a.png");
  io::write_mask(random_mask(rng, 4, 4, 0.5), dir / "lab" / "a.png");
  auto r = run({"augment", "--images", (dir / "img").string(), "--labels",
                (dir / "lab").string(), "--out", (dir / "out").string(),
                "--translate", "1,-2", "--translate", "0,3"});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "out" / "images" / "a_r270_f.png"));
  CHECK(fs::exists(dir / "out" / "labels" / "a_t+1-2.png"));
  CHECK(fs::exists(dir / "out" / "labels" / "a_t+0+3.png"));
  int n = 0;
  for ([[maybe_unused]] auto& e : fs::directory_iterator(dir / "out" / "images"))
    ++n;
  CHECK(n == 10);
}

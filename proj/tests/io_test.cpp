#include <doctest.h>

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "gsiht/io.hpp"

using namespace gsiht;
namespace fs = std::filesystem;

namespace {

// fresh scratch directory per test case
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gsiht_io_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("formatting widths") {
  CHECK(format_sig(1.0) == "1");
  CHECK(format_sig(0.1) == "0.1");
  CHECK(format_sig(1.0 / 3.0) == "0.333333333333");
  CHECK(format_full(0.1) == "0.10000000000000001");
  // 17 significant digits identify a double uniquely
  double v = 0.1 + 0.2;
  CHECK(std::stod(format_full(v)) == v);
}

TEST_CASE("vectors round-trip to the exact bits") {
  TempDir tmp;
  Eigen::VectorXd v(5);
  v << 1.0 / 3.0, -2.5e-300, 7.1e12, 0.0, -0.0;
  save_vector(tmp.file("v.txt"), v);
  Eigen::VectorXd w = load_vector(tmp.file("v.txt"));
  REQUIRE(w.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(w[i] == v[i]);

  save_vector(tmp.file("empty.txt"), Eigen::VectorXd());
  CHECK(load_vector(tmp.file("empty.txt")).size() == 0);

  write_text(tmp.file("bad.txt"), "1.0\nnot_a_number\n");
  CHECK_THROWS_AS(load_vector(tmp.file("bad.txt")), std::runtime_error);
  CHECK_THROWS_AS(load_vector(tmp.file("missing.txt")), std::runtime_error);
}

TEST_CASE("vector loader reports the offending line") {
  TempDir tmp;
  write_text(tmp.file("bad.txt"), "1.0\n2.0\noops\n");
  try {
    load_vector(tmp.file("bad.txt"));
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    CHECK(msg.find(":3") != std::string::npos);
    CHECK(msg.find("oops") != std::string::npos);
  }
}

TEST_CASE("supports round-trip sorted and deduplicated") {
  TempDir tmp;
  save_support(tmp.file("s.txt"), {2, 5, 9});
  CHECK(load_support(tmp.file("s.txt")) == Support{2, 5, 9});

  write_text(tmp.file("messy.txt"), "5\n2\n5\n");
  CHECK(load_support(tmp.file("messy.txt")) == Support{2, 5});

  write_text(tmp.file("frac.txt"), "2.5\n");
  CHECK_THROWS_AS(load_support(tmp.file("frac.txt")), std::runtime_error);

  save_support(tmp.file("none.txt"), {});
  CHECK(load_support(tmp.file("none.txt")).empty());
}

TEST_CASE("design matrices round-trip bit for bit") {
  TempDir tmp;
  Eigen::MatrixXd a(3, 4);
  a << 1, 2, 3, 4, 5.5e-10, -6, 7e100, 8, 9, 10, -0.0, 12;
  save_design(tmp.file("a.bin"), a);
  Eigen::MatrixXd b = load_design(tmp.file("a.bin"));
  REQUIRE(b.rows() == 3);
  REQUIRE(b.cols() == 4);
  CHECK((a - b).norm() == 0.0);

  // truncated payload
  auto size = fs::file_size(tmp.file("a.bin"));
  fs::resize_file(tmp.file("a.bin"), size - 4);
  CHECK_THROWS_AS(load_design(tmp.file("a.bin")), std::runtime_error);

  // absurd header
  std::ofstream out(tmp.file("junk.bin"), std::ios::binary);
  for (int i = 0; i < 16; ++i) out.put(char(0xff));
  out.close();
  CHECK_THROWS_AS(load_design(tmp.file("junk.bin")), std::runtime_error);
}

TEST_CASE("instance directories carry the optional truth files") {
  TempDir tmp;
  Graph g = Graph::grid(3, 3);
  SynthSpec spec;
  spec.graph = &g;
  spec.grid_rows = 3;
  spec.grid_cols = 3;
  spec.s = 3;
  spec.m = 7;
  spec.noise_norm = 0.25;
  spec.seed = 17;
  SynthInstance si = synth_instance(spec);

  std::string dir = tmp.file("inst");
  save_instance_dir(dir, si, spec.noise_norm, spec.seed);
  CHECK(fs::exists(dir + "/manifest.json"));

  SynthInstance back = load_instance_dir(dir);
  CHECK((back.inst.A - si.inst.A).norm() == 0.0);
  CHECK((back.inst.y - si.inst.y).norm() == 0.0);
  CHECK((back.x_true - si.x_true).norm() == 0.0);
  CHECK(back.support == si.support);

  // strip the truth files: still loadable, truth left empty
  fs::remove(dir + "/x_true.txt");
  fs::remove(dir + "/support.txt");
  SynthInstance blind = load_instance_dir(dir);
  CHECK(blind.x_true.size() == 0);
  CHECK(blind.support.empty());

  // inconsistent y is rejected
  save_vector(dir + "/y.txt", Eigen::VectorXd::Zero(3));
  CHECK_THROWS_AS(load_instance_dir(dir), std::runtime_error);
}

TEST_CASE("config files are key = value with comments") {
  TempDir tmp;
  write_text(tmp.file("run.cfg"),
             "# run settings\n"
             "s = 8\n"
             "m-values = 40,60,80\n"
             "  eta=1.0  # trailing comment\n"
             "\n"
             "graph = ./g.txt\n");
  auto cfg = parse_config_file(tmp.file("run.cfg"));
  CHECK(cfg.size() == 4);
  CHECK(cfg.at("s") == "8");
  CHECK(cfg.at("m-values") == "40,60,80");
  CHECK(cfg.at("eta") == "1.0");
  CHECK(cfg.at("graph") == "./g.txt");

  write_text(tmp.file("noeq.cfg"), "s = 8\njust words\n");
  try {
    parse_config_file(tmp.file("noeq.cfg"));
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }

  write_text(tmp.file("nokey.cfg"), "= 8\n");
  CHECK_THROWS_AS(parse_config_file(tmp.file("nokey.cfg")),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_config_file(tmp.file("missing.cfg")),
                  std::runtime_error);
}

TEST_CASE("hash matches the published fnv-1a vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(fnv1a64("hello") != fnv1a64("hellp"));
}

TEST_SUITE_END();

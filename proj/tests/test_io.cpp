#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "glcorner/commands.hpp"
#include "glcorner/records.hpp"
#include "glcorner/snapshot.hpp"
#include "glcorner/svg.hpp"
#include "support/properties.hpp"

using namespace glcorner;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("glcorner-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("sha256 of known strings") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("cache key ignores key order and tracks every input") {
    Json a = {{"b", 1.5}, {"beta", 1.0}}, b = {{"beta", 1.0}, {"b", 1.5}};
    Json res = {{"h", 0.1}};
    CHECK(cache_key("corner", a, res) == cache_key("corner", b, res));
    CHECK(cache_key("corner", a, res) != cache_key("corner", a, {{"h", 0.05}}));
    CHECK(cache_key("corner", a, res, "0.0.1") != cache_key("corner", a, res, "0.0.2"));
    CHECK(cache_key("mu", a, res) != cache_key("corner", a, res));
  }

  TEST_CASE("run record JSON round trip and cache store") {
    RunRecord r;
    r.command = "constants";
    r.params = {{"b", 1.5}};
    r.version = code_version();
    r.started = r.finished = utc_timestamp();
    r.result = {{"E0", -0.0076}};
    r.input_hashes["x.json"] = sha256_hex("x");
    RunRecord q = RunRecord::from_json(r.to_json());
    CHECK(q.to_json() == r.to_json());

    RecordCache cache(scratch("cache"));
    CHECK_FALSE(cache.find("k1").has_value());
    cache.store("k1", r);
    RunRecord other = r;
    other.result = {{"E0", 1.0}};
    cache.store("k1", other);  // existing entries are kept
    REQUIRE(cache.find("k1").has_value());
    CHECK(cache.find("k1")->result == r.result);
  }

  TEST_CASE("snapshot round trip") {
    Mesh2D m = testing::small_disc_mesh();
    ComplexField2D psi = testing::random_field(m.num_nodes(), 4);
    fs::path f = scratch("snap") / "s.glsnap";
    write_snapshot(f, m, psi, {{"eps", 0.2}});
    Snapshot s = read_snapshot(f);
    CHECK(s.header["nodes"] == m.num_nodes());
    CHECK(s.header["meta"]["eps"] == 0.2);
    REQUIRE(s.psi.size() == psi.size());
    CHECK(s.psi == psi);
    CHECK(s.tris == m.tris);
    CHECK(s.nodes[5].x == m.nodes[5].x);
    std::ofstream(f, std::ios::binary) << "garbage";
    CHECK_THROWS_AS(read_snapshot(f), UsageError);
  }

  TEST_CASE("svg output is well formed") {
    Mesh2D m = testing::small_disc_mesh();
    std::vector<double> v(m.num_nodes());
    for (int i = 0; i < m.num_nodes(); ++i) v[i] = m.nodes[i].x;
    std::string h = svg_heatmap(m.nodes, m.tris, v, "x", 80);
    CHECK(h.rfind("<svg", 0) == 0);
    CHECK(h.find("</svg>") != std::string::npos);
    std::string l = svg_lines({{"a", {1, 2, 3}, {1, 4, 9}}}, {"t", "x", "y", true, true, {}});
    CHECK(l.find("<polyline") != std::string::npos);
  }

  TEST_CASE("parameter merging") {
    Json p = merge_params("constants", {{"b", 1.4}}, {{"h", 0.02}});
    CHECK(p["b"] == 1.4);
    CHECK(p["h"] == 0.02);
    CHECK(p["T"] == 15);
    CHECK_THROWS_AS(merge_params("constants", {{"bogus", 1}}, Json::object()), UsageError);
    CHECK_THROWS_AS(merge_params("nonsense", Json::object(), Json::object()), UsageError);
  }

  TEST_CASE("every command exposes its defaults") {
    for (const auto& name : command_names()) {
      CAPTURE(name);
      CHECK_FALSE(command_summary(name).empty());
      CHECK_FALSE(command_params(name).empty());
    }
  }

  TEST_CASE("constants command and the regime boundaries") {
    CommandContext ctx;
    ctx.use_cache = false;
    RunRecord r = run_command("constants", merge_params("constants", {{"h", 0.02}}, {}), ctx);
    CHECK(r.result["E0"].get<double>() < 0);
    CHECK_THROWS_AS(run_command("constants", merge_params("constants", {{"b", 0.9}}, {}), ctx), UsageError);
    RunRecord n = run_command("constants", merge_params("constants", {{"b", 1.8}, {"h", 0.02}}, {}), ctx);
    CHECK(n.result["E0"] == 0.0);
  }

  TEST_CASE("sweep: empty grid and small grid") {
    CommandContext ctx;
    ctx.use_cache = false;
    fs::path out = scratch("sweep");
    CHECK_THROWS_AS(run_sweep({{"command", "constants"}, {"grid", {{"b", Json::array()}}}, {"output", out.string()}}, ctx),
                    UsageError);
    SweepSummary s = run_sweep({{"command", "constants"},
                                {"base", {{"h", 0.05}}},
                                {"grid", {{"b", {1.3, 1.5}}}},
                                {"output", out.string()},
                                {"workers", 2}},
                               ctx);
    CHECK(s.complete);
    CHECK(s.cells == 2);
    CHECK(fs::exists(out / "results.csv"));
    CHECK(fs::exists(out / "bundle.json"));
    CHECK(fs::exists(out / "summary.svg"));
    CHECK(fs::exists(out / "cells" / "cell_001.json"));
  }
}

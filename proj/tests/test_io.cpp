#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "twoway/io.hpp"

using namespace twoway;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("twoway_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_SUITE("netcore") {
    TEST_CASE("manifest with relative paths and id map") {
        const auto dir = scratch_dir("manifest");
        fs::create_directories(dir / "layers");
        put(dir / "layers/f.txt", "0 1 +1\n1 2 -1\n");
        put(dir / "layers/m.txt", "# messages\n0 2\n0 2\n");
        put(dir / "layers/r.txt", "2 1\n");
        put(dir / "ids.txt", "alice 0\nbob 1\ncarol 2\n");
        put(dir / "manifest.json",
            R"({"node_count": 3, "layers": {"F": "layers/f.txt", "M": "layers/m.txt", "R": "layers/r.txt"},)"
            R"( "id_map": "ids.txt"})");
        const auto ds = load_dataset(dir / "manifest.json");
        CHECK(ds.network.node_count() == 3);
        CHECK(ds.network.edge_count(Layer::F) == 2);
        REQUIRE(ds.network.edge_count(Layer::M) == 1);
        CHECK(ds.network.edges(Layer::M)[0].weight == 2);
        CHECK(ds.network.f_sign(1, 2) == Sign::Negative);
        REQUIRE(ds.ids.has_value());
        CHECK(ds.ids->external[2] == "carol");
    }

    TEST_CASE("manifest errors") {
        const auto dir = scratch_dir("bad");
        put(dir / "manifest.json", R"({"node_count": 3})");
        CHECK_THROWS_AS(read_manifest(dir / "manifest.json"), FormatError);
        put(dir / "broken.json", "{");
        CHECK_THROWS_AS(read_manifest(dir / "broken.json"), FormatError);
        CHECK_THROWS_AS(read_manifest(dir / "absent.json"), NotFoundError);

        put(dir / "f.txt", "0 1 +1\n0 9 +1\n");
        put(dir / "e.txt", "");
        put(dir / "m2.json", R"({"node_count": 3, "layers": {"F": "f.txt", "M": "e.txt", "R": "e.txt"}})");
        CHECK_THROWS_AS(load_dataset(dir / "m2.json"), BoundsError);

        put(dir / "g.txt", "0 1 +1\n0 1 maybe\n");
        try {
            read_layer_file(dir / "g.txt", Layer::F);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find("g.txt") != std::string::npos);
        }
    }

    TEST_CASE("pairs") {
        std::istringstream in("# queries\n0 1\n2 3 -1\n");
        const auto pairs = parse_pairs(in);
        REQUIRE(pairs.size() == 2);
        CHECK_FALSE(pairs[0].label.has_value());
        CHECK(pairs[1].label == Sign::Negative);
        std::istringstream bad("1 1\n");
        CHECK_THROWS_AS(parse_pairs(bad), ParseError);
        std::istringstream map("a 0\nb 0\n");
        CHECK_THROWS_AS(IdMap::parse(map, 2), ParseError);
    }
}

#include <cstdio>
#include <fstream>

#include "classext/io.hpp"
#include "classext/states.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace classext;
namespace io = classext::io;

namespace {

std::string temp_path(const std::string& name) { return "/tmp/classext_test_" + name; }

}  // namespace

TEST_CASE("state JSON roundtrips at full precision") {
    RngStream rng(1);
    DensityMatrix state = random_mixed_state(SubsystemLayout({{"a", 2}, {"b", 3}}), rng);
    io::json j = io::state_to_json(state);
    DensityMatrix back = io::state_from_json(j);
    CHECK(back.layout() == state.layout());
    CHECK((back.matrix() - state.matrix()).cwiseAbs().maxCoeff() < 1e-15);

    // Parse-print-parse through text.
    io::json reparsed = io::json::parse(j.dump());
    DensityMatrix back2 = io::state_from_json(reparsed);
    CHECK((back2.matrix() - state.matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("state files survive a disk roundtrip") {
    DensityMatrix state = build_rho_rsp();
    std::string path = temp_path("state.json");
    io::save_state(state, path);
    DensityMatrix back = io::load_state(path);
    CHECK((back.matrix() - state.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    std::remove(path.c_str());
}

TEST_CASE("bad state files are rejected with the offending field named") {
    std::string path = temp_path("bad.json");
    {
        std::ofstream out(path);
        out << R"({"layout": [["a",2]], "matrix": [[[1,0],[0,0]],[[0,0],[0,0]],[[0,0],[0,0]]]})";
    }
    CHECK_THROWS_WITH_AS(io::load_state(path), doctest::Contains("not square"), std::runtime_error);
    {
        std::ofstream out(path);
        out << R"({"layout": [["a",2],["b",2]], "matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]})";
    }
    CHECK_THROWS_WITH_AS(io::load_state(path), doctest::Contains("layout"), std::runtime_error);
    {
        std::ofstream out(path);
        out << R"({"matrix": []})";
    }
    CHECK_THROWS_WITH_AS(io::load_state(path), doctest::Contains("layout"), std::runtime_error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(io::load_state(temp_path("missing.json")), std::runtime_error);
}

TEST_CASE("decomposition JSON roundtrips") {
    RngStream rng(5);
    SeparableDecomposition decomp =
        random_separable(SubsystemLayout::single("a", 2), SubsystemLayout::single("b", 3), 3, rng);
    io::json j = io::decomposition_to_json(decomp);
    SeparableDecomposition back = io::decomposition_from_json(j);
    REQUIRE(back.size() == decomp.size());
    for (std::size_t k = 0; k < decomp.size(); ++k) {
        CHECK(back.terms()[k].weight == doctest::Approx(decomp.terms()[k].weight).epsilon(1e-15));
        CHECK((back.terms()[k].left.matrix() - decomp.terms()[k].left.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    }
    DensityMatrix direct = assemble_separable(decomp);
    DensityMatrix loaded = assemble_separable(back);
    CHECK((direct.matrix() - loaded.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("atomic writes leave no partial file behind") {
    std::string path = temp_path("atomic.txt");
    io::write_text_atomic(path, "payload\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "payload");
    std::ifstream tmp(path + ".tmp");
    CHECK_FALSE(tmp.good());
    std::remove(path.c_str());
}

TEST_CASE("csv values print with six significant digits") {
    CHECK(io::format_csv_value(3.5849625007) == "3.58496");
    CHECK(io::format_csv_value(0.0915) == "0.0915");
    CHECK(io::format_csv_value(2.0) == "2");
}

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include "qpt/config.hpp"
#include "qpt/errors.hpp"
#include "qpt/runner.hpp"
#include "qpt/table.hpp"

using namespace qpt;
using io::ColumnType;

namespace {

io::ResultTable sample_table() {
    io::ResultTable t({{"eta", ColumnType::Real, "1"}, {"N", ColumnType::Integer, "1"}, {"phase", ColumnType::Text, "1"}});
    t.set_provenance("program", "qpt-scaling 1.0.0");
    t.set_provenance("note", "a, \"quoted\" value");
    t.add_row({0.1, std::int64_t{8}, std::string("normal")});
    t.add_row({1.0 / 3.0, std::int64_t{-2}, std::string("has, comma")});
    t.add_row({std::numeric_limits<double>::infinity(), std::int64_t{0}, std::string("say \"hi\"")});
    return t;
}

std::string error_of(const std::string& text) {
    try {
        cli::parse_config(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("real formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.92437772965439573})
        CHECK(std::stod(io::format_real(x)) == x);
    CHECK(io::format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("csv round trip") {
    const auto t = sample_table();
    const std::string csv = io::to_csv(t);
    CHECK(csv.rfind("# program: qpt-scaling 1.0.0\n", 0) == 0);
    CHECK(csv.find("# units:") != std::string::npos);
    CHECK(csv.find("# types:") != std::string::npos);
    CHECK(csv.find("\"has, comma\"") != std::string::npos);
    const auto back = io::from_csv(csv);
    CHECK(back == t);
    CHECK(io::to_csv(back) == csv);
}

TEST_CASE("json round trip") {
    const auto t = sample_table();
    const auto back = io::from_json(io::to_json(t));
    CHECK(back == t);
}

TEST_CASE("typed rows") {
    io::ResultTable t({{"x", ColumnType::Real, "1"}});
    CHECK_THROWS_AS(t.add_row({std::string("text")}), InputError);
    CHECK_THROWS_AS(t.add_row({1.0, 2.0}), InputError);
    t.add_row({2.0});
    CHECK(t.real(0, "x") == 2.0);
    CHECK_THROWS_AS(t.column_index("y"), InputError);
    CHECK_THROWS_AS(io::from_csv("a,b\n1,2\n"), InputError);
}

TEST_CASE("atomic file output") {
    const auto dir = std::filesystem::temp_directory_path() / "qpt_io_test";
    std::filesystem::create_directories(dir);
    const auto t = sample_table();
    io::write_table(dir / "t.csv", t);
    io::write_table(dir / "t.json", t);
    CHECK(io::read_table(dir / "t.csv") == t);
    CHECK(io::read_table(dir / "t.json") == t);
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config parsing") {
    const std::string good = R"({
  "model": "dicke",
  "task": "fidelity",
  "etas": [0.1, 0.5],
  "scales": [0.01]
})";
    const auto c = cli::parse_config(good);
    CHECK(c.model == cli::Model::Dicke);
    CHECK(c.etas.size() == 2);
    CHECK(c.side_or_default() == cli::Side::Below);

    const std::string unknown = "{\n  \"model\": \"dicke\",\n  \"task\": \"fidelity\",\n  \"etaz\": [0.1]\n}";
    const auto e1 = error_of(unknown);
    CHECK(e1.find("etaz") != std::string::npos);
    CHECK(e1.find("line 4") != std::string::npos);

    const std::string syntax = "{\n  \"model\": \"dicke\",\n  \"task\": fidelity\n}";
    CHECK(error_of(syntax).find("line 3") != std::string::npos);

    const std::string typed = "{\n  \"model\": \"dicke\",\n  \"task\": \"fidelity\",\n  \"omega\": \"one\",\n"
                              "  \"pairs\": [[0.1, 0.2]]\n}";
    CHECK(error_of(typed).find("line 4") != std::string::npos);

    const std::string empty_etas = "{\"model\": \"dicke\", \"task\": \"sweep\", \"etas\": [], \"scales\": [0.01]}";
    CHECK_FALSE(error_of(empty_etas).empty());
    const std::string lmg_gamma = "{\"model\": \"lmg\", \"task\": \"fidelity\", \"gamma\": 1.0, \"pairs\": [[1.1, 1.2]]}";
    CHECK_FALSE(error_of(lmg_gamma).empty());
}

TEST_CASE("config hash ignores outputs and threads") {
    auto a = cli::parse_config(R"({"model": "dicke", "task": "fidelity", "pairs": [[0.3, 0.4]]})");
    auto b = a;
    b.csv = "out.csv";
    b.threads = 4;
    CHECK(cli::config_hash(a) == cli::config_hash(b));
    CHECK(cli::config_hash(a).size() == 16);
    b.omega = 2.0;
    CHECK(cli::config_hash(a) != cli::config_hash(b));
}

TEST_CASE("parallel map keeps order and reports the first failure") {
    const auto sq = cli::parallel_map(50, 4, [](std::size_t i) { return double(i * i); });
    for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == double(i * i));
    try {
        cli::parallel_map(20, 4, [](std::size_t i) -> int {
            if (i == 7 || i == 13) throw InputError("fail " + std::to_string(i));
            return 0;
        });
        FAIL("no exception");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()) == "fail 7");
    }
}

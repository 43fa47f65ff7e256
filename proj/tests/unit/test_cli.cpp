#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qw/cli.hpp"
#include "qw/model.hpp"

namespace fs = std::filesystem;
using namespace qw::cli;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("qwalk_test_" + std::to_string(std::rand()) + "_" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int call(std::vector<std::string> args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    if (out_text) *out_text = out.str();
    return code;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("angle expressions") {
    CHECK(parse_angle("pi") == qw::kPi);
    CHECK(parse_angle("3pi/2") == 3 * qw::kPi / 2);
    CHECK(parse_angle("-pi/4") == -qw::kPi / 4);
    CHECK(parse_angle("2*pi/3") == 2 * qw::kPi / 3);
    CHECK(parse_angle("0.5") == 0.5);
    CHECK(parse_angle(" 1.5pi ") == 1.5 * qw::kPi);
    CHECK_THROWS_AS(parse_angle("tau"), ConfigError);
    CHECK_THROWS_AS(parse_angle(""), ConfigError);
    CHECK_THROWS_AS(parse_angle("pi/0"), ConfigError);
}

TEST_CASE("simulate writes the occupied sites") {
    TempDir dir;
    REQUIRE(call({"simulate", "--t", "100", "--out", dir / "s.csv"}) == kOk);
    const auto rows = read_csv(dir / "s.csv");
    REQUIRE(rows.size() == 102);
    CHECK(rows[0] == std::vector<std::string>{"x", "x_over_t", "prob", "t_prob", "binned_density"});
    double total = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stol(rows[i][0]) == -100 + 2 * static_cast<long>(i - 1));
        total += std::stod(rows[i][2]);
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);

    REQUIRE(call({"simulate", "--t", "0", "--out", dir / "z.csv"}) == kOk);
    const auto zero = read_csv(dir / "z.csv");
    REQUIRE(zero.size() == 2);
    CHECK(zero[1][0] == "0");
    CHECK(zero[1][2] == "1");
}

TEST_CASE("simulate output is byte reproducible") {
    TempDir dir;
    REQUIRE(call({"simulate", "--t", "200", "--sigma-plus", "0.3", "--out", dir / "a.csv"}) == kOk);
    REQUIRE(call({"simulate", "--t", "200", "--sigma-plus", "0.3", "--out", dir / "b.csv"}) == kOk);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
}

TEST_CASE("configuration errors exit 2 without output") {
    TempDir dir;
    CHECK(call({"simulate", "--alpha-re", "2", "--out", dir / "bad.csv"}) == kUsage);
    CHECK_FALSE(fs::exists(dir / "bad.csv"));
    CHECK(call({"simulate", "--t", "10", "--out", dir / "narrow.csv"}) == kUsage);
    CHECK_FALSE(fs::exists(dir / "narrow.csv"));
    CHECK(call({"density", "--grid-points", "2", "--out", dir / "d.csv"}) == kUsage);
    CHECK(call({"timeavg", "--xmax", "-1", "--out", dir / "t.csv"}) == kUsage);
    CHECK(call({"simulate", "--sigma-plus", "banana", "--out", dir / "x.csv"}) == kUsage);
    CHECK(call({"nonsense"}) == kUsage);
    CHECK(call({}) == kUsage);
    CHECK(call({"verify", "--suite", "everything"}) == kUsage);
}

TEST_CASE("resource cap from the environment exits 3") {
    TempDir dir;
    ::setenv("QW_MAX_T", "50", 1);
    CHECK(call({"simulate", "--t", "100", "--out", dir / "r.csv"}) == kResource);
    CHECK(call({"simulate", "--t", "50", "--bin-width", "0.05", "--out", dir / "ok.csv"}) == kOk);
    ::setenv("QW_MAX_T", "lots", 1);
    CHECK(call({"simulate", "--t", "10", "--out", dir / "q.csv"}) == kUsage);
    ::unsetenv("QW_MAX_T");
    CHECK_FALSE(fs::exists(dir / "r.csv"));
}

TEST_CASE("density grid and sidecar") {
    TempDir dir;
    REQUIRE(call({"density", "--grid-points", "1001", "--out", dir / "d.csv"}) == kOk);
    const auto rows = read_csv(dir / "d.csv");
    REQUIRE(rows.size() == 1002);
    CHECK(rows[0] == std::vector<std::string>{"x", "w", "f_k", "density"});
    CHECK(std::stod(rows[1][0]) == doctest::Approx(-qw::kInvSqrt2 + 1e-6).epsilon(1e-15));
    CHECK(std::stod(rows[1001][0]) == doctest::Approx(qw::kInvSqrt2 - 1e-6).epsilon(1e-15));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][3]) >= -1e-10);

    std::ifstream side(dir / "d.json");
    const auto j = nlohmann::json::parse(side);
    CHECK(j.at("C").get<double>() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(j.at("ac_mass").get<double>() == doctest::Approx(0.6).epsilon(1e-8));
    CHECK(j.at("sum").get<double>() == doctest::Approx(1.0).epsilon(1e-8));

    REQUIRE(call({"density", "--grid-points", "5", "--format", "json", "--out", dir / "d2.json"}) == kOk);
    std::ifstream js(dir / "d2.json");
    const auto table = nlohmann::json::parse(js);
    CHECK(table.at("density").size() == 5);
    CHECK(fs::exists(dir / "d2.sidecar.json"));
}

TEST_CASE("time-averaged measure table") {
    TempDir dir;
    REQUIRE(call({"timeavg", "--xmax", "3", "--out", dir / "t.csv"}) == kOk);
    const auto rows = read_csv(dir / "t.csv");
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == std::vector<std::string>{"x", "mu_bar"});
    const double expect[] = {12.0 / 3125, 12.0 / 625, 12.0 / 125, 4.0 / 25, 12.0 / 125, 12.0 / 625, 12.0 / 3125};
    for (int i = 0; i < 7; ++i) CHECK(std::stod(rows[i + 1][1]) == doctest::Approx(expect[i]).epsilon(1e-14));

    REQUIRE(call({"timeavg", "--xmax", "0", "--out", dir / "t0.csv"}) == kOk);
    CHECK(read_csv(dir / "t0.csv").size() == 2);
}

TEST_CASE("verify reports and exit codes") {
    std::string text;
    REQUIRE(call({"verify", "--suite", "mass"}, &text) == kOk);
    const auto rep = nlohmann::json::parse(text);
    CHECK(rep.at("passed").get<bool>());
    CHECK(rep.at("checks").size() == 1);
    CHECK(rep.at("checks")[0].at("status") == "pass");
    CHECK(rep.at("checks")[0].at("tolerance").get<double>() == 1e-6);

    REQUIRE(call({"verify", "--suite", "residue", "--seed-file", QW_FIXTURE_DIR "/random_tuples.json"}, &text) == kOk);
    CHECK(nlohmann::json::parse(text).at("checks").size() == 21);

    // Times must be strictly ascending.
    CHECK(call({"verify", "--suite", "converge", "--t", "100", "--t", "100"}, &text) == kUsage);
}

TEST_CASE("sweep writes one output set per entry and a summary") {
    TempDir dir;
    {
        std::ofstream f(dir / "params.json");
        f << R"([{"sigma_plus": "3pi/2", "sigma_minus": "pi", "t": 100, "out": "example"},
                 {"sigma_plus": 0.4, "sigma_minus": 2.0, "alpha_re": 0.6, "beta_im": 0.8}])";
    }
    REQUIRE(call({"sweep", dir / "params.json", "--out", dir / "runs"}) == kOk);
    CHECK(fs::exists(dir / "runs/example/simulate.csv"));
    CHECK(fs::exists(dir / "runs/example/density.json"));
    CHECK(fs::exists(dir / "runs/entry_00001/timeavg.csv"));
    CHECK_FALSE(fs::exists(dir / "runs/entry_00001/simulate.csv"));
    const auto summary = read_csv(dir / "runs/summary.csv");
    REQUIRE(summary.size() == 3);
    CHECK(summary[0] == std::vector<std::string>{"index", "out", "C", "ac_mass", "sum", "mass_check"});
    CHECK(summary[1][1] == "example");
    CHECK(summary[2][5] == "pass");
}

TEST_CASE("sweep edge cases") {
    TempDir dir;
    {
        std::ofstream(dir / "empty.json") << "[]";
        std::ofstream(dir / "dup.json") << R"([{"out": "a"}, {"out": "a/"}])";
        std::ofstream(dir / "broken.json") << "[{";
        std::ofstream(dir / "late.json") << R"([{"out": "a"}, {"out": "b", "t": 10}])";
    }
    REQUIRE(call({"sweep", dir / "empty.json", "--out", dir / "e"}) == kOk);
    CHECK(read_csv(dir / "e/summary.csv").size() == 1);

    CHECK(call({"sweep", dir / "dup.json", "--out", dir / "d"}) == kUsage);
    CHECK_FALSE(fs::exists(dir / "d"));
    CHECK(call({"sweep", dir / "broken.json", "--out", dir / "b"}) == kUsage);

    // The second entry fails while running (bins narrower than the lattice);
    // nothing of the run survives.
    CHECK(call({"sweep", dir / "late.json", "--out", dir / "l"}) == kUsage);
    CHECK_FALSE(fs::exists(dir / "l"));
}

TEST_CASE("sweep over the seeded tuples passes every mass check") {
    TempDir dir;
    REQUIRE(call({"sweep", QW_FIXTURE_DIR "/random_tuples.json", "--out", dir / "runs"}) == kOk);
    const auto summary = read_csv(dir / "runs/summary.csv");
    REQUIRE(summary.size() == 201);
    for (std::size_t i = 1; i < summary.size(); ++i) {
        CHECK(summary[i][5] == "pass");
        CHECK(std::abs(std::stod(summary[i][4]) - 1.0) <= 1e-6);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "twh/detasym.hpp"
#include "twh/invapprox.hpp"
#include "twh/spec_io.hpp"

#ifndef TWH_CLI_PATH
#error "TWH_CLI_PATH must point at the twh executable"
#endif

using namespace twh;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" TWH_CLI_PATH "\" " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

fs::path temp_dir() {
    const fs::path d = fs::temp_directory_path() / ("twh_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::string cell;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        if (!line.empty() && line.back() == ',') row.push_back("");
        rows.push_back(row);
    }
    return rows;
}

cplx from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

TEST_CASE("det examples") {
    auto r = run("det --symbol sigma0 --alpha 5 --method thm4");
    REQUIRE(r.status == 0);
    auto j = json::parse(r.out);
    CHECK(std::abs(from_json(j["value"]) - std::exp(-5.0) * 3.5) < 1e-12 * std::exp(-5.0) * 3.5);
    CHECK(std::abs(from_json(j["A_or_B"]) - 7.0) < 1e-13);
    CHECK_FALSE(j.contains("resonance_distance"));

    r = run("det --symbol two-zeros-cauchy --alpha 6 --method thm3");
    REQUIRE(r.status == 0);
    j = json::parse(r.out);
    CHECK(std::abs(from_json(j["value"]) - std::exp(-6.0) * std::cos(6.0)) < 1e-12 * std::exp(-6.0));
    CHECK(j["resonance_distance"].get<double>() > 0.0);
    CHECK(j["method"] == "thm3");
    CHECK(j.contains("quadrature_error_estimate"));

    r = run("det --symbol sigma0 --alpha 3 --method oracle --nodes 300");
    REQUIRE(r.status == 0);
    j = json::parse(r.out);
    CHECK(j["nodes"] == 300);
    CHECK(std::abs(from_json(j["value"]) - std::exp(-3.0) * 2.5) < 1e-7);
}

TEST_CASE("exit codes") {
    const auto d = temp_dir();
    std::ofstream(d / "bad.spec") << "p = 1\nzeros = [[0.3, 0.5]\n";
    CHECK(run("det --symbol " + (d / "bad.spec").string() + " --alpha 2 --method thm3").status == 2);
    std::ofstream(d / "unknown.spec") << "p = 1\nshape = round\n";
    CHECK(run("det --symbol " + (d / "unknown.spec").string() + " --alpha 2 --method thm3").status == 2);
    CHECK(run("det --symbol no-such-preset --alpha 2 --method thm3").status == 2);
    CHECK(run("det --symbol sigma0 --alpha 2 --method thm3").status == 2);
    CHECK(run("det --symbol sigma0 --alpha 2").status == 2);
    CHECK(run("inverse --symbol two-zeros-cauchy --alpha 1.5707963267948966 --method thm1").status == 3);
    CHECK(run("inverse --symbol two-zeros-cauchy --alpha 2 --method thm1 --grid 3").status == 0);
    // near resonance thm3 still reports a value
    const auto r = run("det --symbol two-zeros-cauchy --alpha 1.5707963267948966 --method thm3");
    CHECK(r.status == 0);
    CHECK(json::parse(r.out)["warnings"].size() == 1);
    fs::remove_all(d);
}

TEST_CASE("spec files") {
    const auto d = temp_dir();
    std::ofstream(d / "asym.spec") << "# two real zeros, asymmetric tau\n"
                                      "p = 1\n"
                                      "zeros = [[0.3, 0.5]]\n"
                                      "poles = [[0, 1], [0, -2], [-0.4, 1.5]]\n"
                                      "scale = auto\n";
    auto r = run("factorize --symbol " + (d / "asym.spec").string() + " --dual");
    REQUIRE(r.status == 0);
    const auto j = json::parse(r.out);
    CHECK(j["factorizations"].size() == 2);
    CHECK(j["factorizations"][0]["contour"] == "C1");
    CHECK(j["factorizations"][0].contains("u_plus"));
    CHECK(j["diagnostics"]["winding"] == 0);

    std::ofstream(d / "preset.spec") << "preset = two-zeros-cauchy\n";
    const auto a = run("det --symbol " + (d / "preset.spec").string() + " --alpha 4 --method dual");
    const auto b = run("det --symbol two-zeros-cauchy --alpha 4 --method dual");
    REQUIRE(a.status == 0);
    CHECK(json::parse(a.out)["value"] == json::parse(b.out)["value"]);
    fs::remove_all(d);
}

TEST_CASE("JSON round-trip is bit-exact") {
    const auto d = temp_dir();
    const auto path = d / "det.json";
    REQUIRE(run("det --symbol two-zeros-cauchy --alpha 6.5 --method thm3 --out " + path.string()).status == 0);
    const auto j = json::parse(slurp(path));
    const auto rep = asymptotic_determinant(preset_symbol("two-zeros-cauchy"), 6.5, DetMethod::thm3);
    CHECK(from_json(j["value"]) == rep.value);
    CHECK(from_json(j["G"]) == rep.G);
    CHECK(from_json(j["E"]) == rep.E);
    CHECK(from_json(j["A_or_B"]) == *rep.A_or_B);
    // re-serializing reproduces the file
    CHECK(j.dump(2) + "\n" == slurp(path));
    fs::remove_all(d);
}

TEST_CASE("CSV round-trip is bit-exact") {
    const auto r = run("inverse --symbol two-zeros-cauchy --alpha 6 --grid 5 --method thm1");
    REQUIRE(r.status == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 26);
    CHECK(rows[0] == std::vector<std::string>{"x", "y", "re", "im"});
    const auto inv = thm1_inverse_kernel(factorize(preset_symbol("two-zeros-cauchy")), 6.0);
    for (size_t k = 1; k < rows.size(); ++k) {
        const double x = std::strtod(rows[k][0].c_str(), nullptr), y = std::strtod(rows[k][1].c_str(), nullptr);
        const cplx v(std::strtod(rows[k][2].c_str(), nullptr), std::strtod(rows[k][3].c_str(), nullptr));
        CHECK(v == eval_inverse_kernel(inv, x, y));
        CHECK(format_double(x) == rows[k][0]);
    }
    CHECK(std::strtod(rows[1][0].c_str(), nullptr) == 1.0);
}

TEST_CASE("sweep report") {
    const auto r = run("sweep --symbol two-zeros-cauchy --alpha 4:10:4 --methods thm3,oracle,dual");
    REQUIRE(r.status == 0);
    const auto rows = parse_csv(r.out);
    const size_t width = rows[0].size();
    CHECK(width == 16);
    for (const auto& row : rows) CHECK(row.size() == width);
    // 12 value rows, then (4 errors + slope) for each of 3 pairs
    CHECK(rows.size() == 1 + 12 + 15);
    for (size_t k = 1; k <= 12; ++k) CHECK(rows[k][0] == "value");
    // value rows ordered by alpha
    for (size_t k = 2; k <= 12; ++k) CHECK(std::stod(rows[k][1]) >= std::stod(rows[k - 1][1]));
    bool saw = false;
    for (const auto& row : rows) {
        if (row[0] == "error") CHECK((row[3] == "oracle") == !row[13].empty());
        if (row[0] == "slope" && row[2] == "thm3" && row[3] == "oracle") {
            saw = true;
            CHECK(std::stod(row[15]) < 0.0);
        }
    }
    CHECK(saw);
    CHECK(run("sweep --symbol sigma0 --alpha 4:2:3 --methods thm4").status == 2);
}

TEST_CASE("sweep output does not depend on the thread count") {
    const std::string args = "sweep --symbol sigma0 --alpha 2:8:7 --methods thm4,oracle --nodes-per-unit 60";
    const auto one = run(args, "WH_THREADS=1");
    const auto four = run(args, "WH_THREADS=4");
    const auto again = run(args, "WH_THREADS=4");
    REQUIRE(one.status == 0);
    CHECK(one.out == four.out);
    CHECK(four.out == again.out);
    const auto timed = run(args + " --timing", "WH_THREADS=2");
    REQUIRE(timed.status == 0);
    CHECK(parse_csv(timed.out)[0].back() == "seconds");
}

TEST_CASE("verify anchors") {
    const auto r = run("verify --suite anchors");
    CHECK(r.status == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS anchors/sigma0 thm4 exact") != std::string::npos);
    CHECK(run("verify --suite nothing").status == 2);
}

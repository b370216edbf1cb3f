#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "okcf/runner.hpp"

using namespace okcf;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
    fs::path p = fs::current_path() / "runner_tmp";
    fs::create_directories(p);
    return p;
}

std::string write_file(const std::string& name, const std::string& text) {
    fs::path p = tmp_dir() / name;
    std::ofstream f(p);
    f << text;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("config parsing, include level and overrides") {
    std::string inc = write_file("base.cfg", "d = 1\nmax_terms = 20\n");
    auto cfg = ExperimentConfig::from_string(
        "include = " + inc + "\nmax_terms = 30\nz = sqrt(2) # comment\n",
        tmp_dir().string());
    CHECK(cfg.ring_d() == 1);
    CHECK(cfg.get_long("max_terms", 0) == 30); // own key wins
    CHECK(cfg.get("z") == "sqrt(2)");

    CHECK_THROWS_AS(cfg.get("nonexistent"), config_error);
    CHECK_THROWS_AS(ExperimentConfig::from_string("novalue\n"), config_error);

    // nested include refused
    std::string nested =
        write_file("nested.cfg", "include = " + inc + "\n");
    CHECK_THROWS_AS(ExperimentConfig::from_string(
                        "include = " + nested + "\n", tmp_dir().string()),
                    config_error);

    // hash is order-insensitive and value-sensitive
    auto c1 = ExperimentConfig::from_string("a = 1\nb = 2\n");
    auto c2 = ExperimentConfig::from_string("b = 2\na = 1\n");
    auto c3 = ExperimentConfig::from_string("a = 1\nb = 3\n");
    CHECK(c1.hash() == c2.hash());
    CHECK(c1.hash() != c3.hash());
}

TEST_CASE("okint and rational literals") {
    const RingSpec& g = RingSpec::get(1);
    OKInt x = parse_okint("3,-2", g);
    CHECK(x == OKInt(3, -2, g));
    CHECK_THROWS_AS(parse_okint("3", g), config_error);

    auto cfg = ExperimentConfig::from_string("omega = 17/16\nw2 = 1.0625\n");
    CHECK(cfg.get_rational("omega", 0) == mpq_class(17, 16));
    CHECK(cfg.get_rational("w2", 0) == mpq_class(17, 16));
    CHECK(cfg.get_rational("missing", mpq_class(3)) == 3);
}

TEST_CASE("cmd_expand: sqrt(2) dump with classical denominators") {
    std::string cfgp = write_file(
        "expand.cfg", "d = 1\nz = sqrt(2)\nmax_terms = 20\nseed = 5\n");
    std::string outp = (tmp_dir() / "expand.out").string();
    int rc = run_cli({"expand", "--config", cfgp, "--out", outp});
    CHECK(rc == 0);
    auto lines = data_lines(slurp(outp));
    REQUIRE(lines.size() == 20);
    // |q_n| decimal strings parse back to the classical integers
    long want[] = {1, 2, 5, 12, 29, 70, 169, 408};
    for (int n = 0; n < 8; ++n) {
        auto& l = lines[(size_t)n];
        auto pos = l.find("\"abs_q\":\"");
        REQUIRE(pos != std::string::npos);
        double v = std::stod(l.substr(pos + 9));
        CHECK(v == doctest::Approx((double)want[n]).epsilon(1e-12));
    }
}

TEST_CASE("cmd_expand: exact lattice input terminates in one row") {
    std::string cfgp =
        write_file("expand2.cfg", "d = 1\nz = 1+i\nmax_terms = 10\n");
    std::string outp = (tmp_dir() / "expand2.out").string();
    CHECK(run_cli({"expand", "--config", cfgp, "--out", outp}) == 0);
    std::string text = slurp(outp);
    CHECK(data_lines(text).size() == 1);
    CHECK(text.find("terminated=1") != std::string::npos);
}

TEST_CASE("invalid ring tag exits with the config code") {
    std::string cfgp = write_file("bad.cfg", "d = 5\nz = sqrt(2)\n");
    std::string outp = (tmp_dir() / "bad.out").string();
    CHECK(run_cli({"expand", "--config", cfgp, "--out", outp}) == 2);
}

TEST_CASE("cmd_orbit: origin sweep has strictly increasing heights") {
    std::string cfgp = write_file(
        "orbit.cfg",
        "d = 1\nz = sqrt(2)\ntarget = origin\nmax_terms = 45\nk_min = 1\n"
        "k_max = 40\nseed = 9\n");
    std::string outp = (tmp_dir() / "orbit.csv").string();
    REQUIRE(run_cli({"orbit", "--config", cfgp, "--out", outp}) == 0);
    auto lines = data_lines(slurp(outp));
    REQUIRE(lines.size() == 41); // header + 40 rows
    double prev = 0;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::istringstream is(lines[i]);
        std::string cell;
        for (int c = 0; c < 7; ++c) std::getline(is, cell, ',');
        double h = std::stod(cell);
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("cmd_orbit: empty admissible set yields an empty CSV, exit 0") {
    // very shallow y-expansion: no (j, k) pairs in range
    std::string cfgp = write_file(
        "orbit_empty.cfg",
        "d = 1\nz = sqrt(2)\ntarget = irrational\ny1 = sqrt(3)\n"
        "max_terms = 4\nseed = 1\n");
    std::string outp = (tmp_dir() / "orbit_empty.csv").string();
    CHECK(run_cli({"orbit", "--config", cfgp, "--out", outp}) == 0);
    CHECK(data_lines(slurp(outp)).size() == 1); // header only
}

TEST_CASE("byte-identical reruns with the same config") {
    std::string cfgp = write_file(
        "repro.cfg",
        "d = 1\nz = sqrt(2)\ntarget = rational\ntarget_a = 0,0\n"
        "target_b = 1,0\nmax_terms = 30\nk_min = 2\nk_max = 20\nseed = 3\n");
    std::string o1 = (tmp_dir() / "r1.csv").string();
    std::string o2 = (tmp_dir() / "r2.csv").string();
    REQUIRE(run_cli({"orbit", "--config", cfgp, "--out", o1}) == 0);
    REQUIRE(run_cli({"orbit", "--config", cfgp, "--out", o2}) == 0);
    CHECK(slurp(o1) == slurp(o2));
    CHECK(!data_lines(slurp(o1)).empty());
}

TEST_CASE("cmd_exponent: synthetic self-test recovers the slope") {
    std::string cfgp = write_file(
        "expo.cfg",
        "d = 1\nsynthetic_slope = 0.5\nsynthetic_n = 300\nseed = 21\n");
    std::string outp = (tmp_dir() / "expo.report").string();
    REQUIRE(run_cli({"exponent", "--config", cfgp, "--out", outp}) == 0);
    std::string text = slurp(outp);
    auto pos = text.find("mu_fit: ");
    REQUIRE(pos != std::string::npos);
    double mu = std::stod(text.substr(pos + 8));
    CHECK(mu == doctest::Approx(0.5).epsilon(0.1));
    CHECK(fs::exists(outp + ".plot.csv"));
}

TEST_CASE("cmd_exponent: origin run reports mu near 1") {
    std::string cfgp = write_file(
        "expo_origin.cfg",
        "d = 1\nz = sqrt(2)\ntarget = origin\nmax_terms = 42\nk_min = 1\n"
        "k_max = 40\nseed = 2\n");
    std::string outp = (tmp_dir() / "expo_origin.report").string();
    REQUIRE(run_cli({"exponent", "--config", cfgp, "--out", outp}) == 0);
    std::string text = slurp(outp);
    auto pos = text.find("mu_emp: ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(text.substr(pos + 8)) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(text.find("predicted_rat_mu: 1/2") != std::string::npos);
}

TEST_CASE("cmd_dirichlet writes a verified grid") {
    std::string cfgp = write_file(
        "dir.cfg", "d = 1\nz = sqrt(2)\nq_min = 8\nq_max = 32\nseed = 4\n");
    std::string outp = (tmp_dir() / "dir.csv").string();
    REQUIRE(run_cli({"dirichlet", "--config", cfgp, "--out", outp}) == 0);
    auto lines = data_lines(slurp(outp));
    REQUIRE(lines.size() == 4); // header + Q = 8, 16, 32
    for (size_t i = 1; i < lines.size(); ++i)
        CHECK(lines[i].back() == '1'); // verified column
}

TEST_CASE("missing subcommand or config exits nonzero") {
    CHECK(run_cli({}) != 0);
    CHECK(run_cli({"expand"}) != 0);
    CHECK(run_cli({"expand", "--config", "/nonexistent/file.cfg"}) == 2);
}

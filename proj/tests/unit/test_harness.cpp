#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hyperlac/harness.hpp"

using namespace hyperlac;

TEST_CASE("empty config gives the defaults") {
    const auto c = validate_config("");
    CHECK(c.grid.n_r == 2048);
    CHECK(c.dimensions == std::vector<int>{2, 3});
    CHECK(!c.family.has_value());
    CHECK(c.estimates.alphas.size() == 4);
    CHECK(validate_config("# only a comment\n\n").echo() == c.echo());
}

TEST_CASE("keys are parsed and echoed") {
    const auto c = validate_config("grid.n_r = 1024\nmaximal.ps = 1.5, 3\nestimates.alphas = 0, 0.5+2i, edge\n"
                                   "family = gaussian:1, smoothed-annulus:0.5\n");
    CHECK(c.grid.n_r == 1024);
    CHECK(c.maximal.ps == std::vector<double>{1.5, 3});
    CHECK(c.estimates.alphas[1].value == cplx(0.5, 2));
    CHECK(c.estimates.alphas[2].resolve(3) == cplx(-0.4));
    REQUIRE(c.family.has_value());
    CHECK(c.family->size() == 2);
    const auto e = c.echo();
    CHECK(e.at("grid.n_r") == "1024");
    CHECK(e.at("family") == "gaussian:1,smoothed-annulus:0.5");
}

TEST_CASE("alpha parsing") {
    CHECK(parse_alpha("1").value == cplx(1));
    CHECK(parse_alpha("-0.4").value == cplx(-0.4));
    CHECK(parse_alpha("0.5+i").value == cplx(0.5, 1));
    CHECK(parse_alpha("0.5-2i").value == cplx(0.5, -2));
    CHECK(parse_alpha("2i").value == cplx(0, 2));
    CHECK(parse_alpha("edge").edge);
    CHECK_THROWS(parse_alpha("one"));
    CHECK_THROWS(parse_alpha(""));
}

TEST_CASE("invalid configs are rejected with the offending key") {
    auto rejects = [](const std::string& text, const std::string& key) {
        try {
            validate_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what()).find(key) != std::string::npos;
        }
        return false;
    };
    CHECK(rejects("grid.bogus = 3", "grid.bogus"));
    CHECK(rejects("grid.n_r = 12x", "grid.n_r"));
    CHECK(rejects("grid.n_r = 1024\ngrid.n_r = 512", "grid.n_r"));
    CHECK(rejects("no equals sign", "line 1"));
    CHECK(rejects("family =", "family"));
    CHECK(rejects("family = box:1", "family"));
    CHECK(rejects("kunze_stein.ps = 2.5", "kunze_stein.ps"));
    CHECK(rejects("i3.J_check = 10", "i3.J_check"));
    // Re(alpha) = (1-n)/2 exactly sits on the excluded boundary.
    CHECK(rejects("dimensions = 2\nestimates.alphas = -0.5", "estimates.alphas"));
    CHECK(rejects("dimensions = 3\ni3.alphas = -1", "i3.alphas"));
    CHECK(rejects("dimensions = 1", "dimensions"));
}

TEST_CASE("alpha = -0.4 is admissible in n = 2") {
    CHECK_NOTHROW(validate_config("dimensions = 2\nestimates.alphas = -0.4"));
}

TEST_CASE("fine seed grids double the resolution") {
    auto c = validate_config("");
    apply_seed_grids(c, "fine");
    CHECK(c.grid.n_r == 4096);
    CHECK(c.grid.n_lambda == 8192);
    CHECK_THROWS_AS(apply_seed_grids(c, "coarse"), ConfigError);
}

TEST_CASE("commands round-trip through their names") {
    for (Command c : {Command::plancherel, Command::symbol_estimates, Command::i3, Command::kunze_stein,
                      Command::cz_tails, Command::maximal_sweep, Command::region, Command::all})
        CHECK(command_from_string(to_string(c)) == c);
    CHECK_THROWS_AS(command_from_string("everything"), ConfigError);
}

TEST_CASE("CSV rows leave unset fields empty and quote the check text") {
    CheckRow r;
    r.experiment_id = "x";
    r.n = 2;
    r.value = 0.5;
    r.tolerance = 1;
    r.pass = true;
    r.check = "a, b";
    CHECK(r.csv_row() == "x,2,,,,,,,,,0.5,1,1,\"a, b\"");
}

TEST_CASE("region command output is deterministic") {
    const auto dir = std::filesystem::temp_directory_path() / "hyperlac_region_test";
    std::filesystem::remove_all(dir);
    auto cfg = validate_config("");
    cfg.output_dir = (dir / "a").string();
    const auto first = run(Command::region, cfg);
    cfg.output_dir = (dir / "b").string();
    const auto second = run(Command::region, cfg);
    CHECK(first.pass);
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    for (const char* name : {"region.csv", "region_polyline_n2.csv", "region_polyline_n3.csv"}) {
        CAPTURE(name);
        const auto a = slurp(dir / "a" / name);
        CHECK(!a.empty());
        CHECK(a == slurp(dir / "b" / name));
    }
    CHECK(slurp(dir / "a" / "region_polyline_n2.csv").rfind("inv_p,re_alpha,curve\n", 0) == 0);
    std::filesystem::remove_all(dir);
}

#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "focklab/cli.hpp"

namespace cli = focklab::cli;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/focklab_test_") + name;
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("weight-info wiring") {
    const auto out = tmp_path("winfo.json");
    const int code = cli::run({"weight-info", "--weight", "power:3", "--out", out});
    REQUIRE(code == 0);
    const auto rep = json::parse(slurp(out));
    CHECK(rep["results"]["class_I"]["in_class_I"] == true);
    CHECK(rep["config"]["weight"] == "power:3");
    CHECK(rep["tool"]["version"] == cli::kVersion);
    std::remove(out.c_str());
}

TEST_CASE("lp reports ratio 1/2 for a constant on the gaussian") {
    const auto out = tmp_path("lp.json");
    const auto csv = tmp_path("lp.csv");
    REQUIRE(cli::run({"lp", "--weight", "gauss", "--p", "2", "--q", "2", "--fn", "poly:5",
                      "--out", out, "--csv", csv}) == 0);
    const auto rep = json::parse(slurp(out));
    CHECK(rep["results"]["ratios"][0]["ratio"].get<double>() == doctest::Approx(0.5).epsilon(1e-7));
    // CSV side output has the psi profile with a header row
    const auto table = slurp(csv);
    CHECK(table.rfind("r,psi,psi_dphi\n", 0) == 0);
    std::remove(out.c_str());
    std::remove(csv.c_str());
}

TEST_CASE("tg-check matches the closed-form threshold") {
    const auto out = tmp_path("tg.json");
    REQUIRE(cli::run({"tg-check", "--symbol", "poly:0,0,0,1", "--weight", "power:3", "--p", "2",
                      "--q", "2", "--out", out}) == 0);
    const auto rep = json::parse(slurp(out));
    CHECK(rep["results"]["verdict"] == "Bounded");
    CHECK(rep["results"]["closed_form"]["bounded"] == true);
    std::remove(out.c_str());
}

TEST_CASE("identical configs give byte-identical reports") {
    const std::vector<std::vector<std::string>> cases = {
        {"shift", "--weight", "gauss", "--n", "60", "--seed", "7"},
        {"lp", "--weight", "power:3", "--p", "2", "--q", "2", "--fn", "poly:1,1"},
    };
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto out1 = tmp_path("det1.json");
        const auto out2 = tmp_path("det2.json");
        auto run_to = [&](const std::string& path) {
            auto args = cases[c];
            args.push_back("--out");
            args.push_back(path);
            REQUIRE(cli::run(args) == 0);
        };
        run_to(out1);
        run_to(out2);
        CHECK(slurp(out1) == slurp(out2));
        CHECK(!slurp(out1).empty());
        std::remove(out1.c_str());
        std::remove(out2.c_str());
    }
}

TEST_CASE("cover subcommand verifies a small domain") {
    const auto out = tmp_path("cover.json");
    const auto csv = tmp_path("centers.csv");
    REQUIRE(cli::run({"cover", "--weight", "power:3", "--rmax", "2.5", "--out", out, "--csv",
                      csv}) == 0);
    const auto rep = json::parse(slurp(out));
    CHECK(rep["results"]["verification"]["separation_ok"] == true);
    CHECK(rep["results"]["verification"]["coverage_ok"] == true);
    CHECK(rep["results"]["n_centers"].get<int>() > 100);
    CHECK(slurp(csv).rfind("x,y,radius\n", 0) == 0);
    std::remove(out.c_str());
    std::remove(csv.c_str());
}

TEST_CASE("config file round trip") {
    const auto cfg = tmp_path("cfg.ini");
    const auto out1 = tmp_path("cfg1.json");
    const auto out2 = tmp_path("cfg2.json");
    {
        std::ofstream f(cfg);
        f << "# focklab run config\n[lp]\nweight = \"gauss\"\np = 2\nq = 2\nfn = \"poly:5\"\n";
    }
    REQUIRE(cli::run({"--config", cfg, "lp", "--out", out1}) == 0);
    REQUIRE(cli::run({"lp", "--weight", "gauss", "--p", "2", "--q", "2", "--fn", "poly:5",
                      "--out", out2}) == 0);
    CHECK(slurp(out1) == slurp(out2));
    std::remove(cfg.c_str());
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("carleson subcommand ingests CSV measures") {
    const auto meas = tmp_path("mu.csv");
    const auto out = tmp_path("carleson.json");
    {
        std::ofstream f(meas);
        f << "x,y,mass\n0,0,1\n1.5,0.25,0.125\n";
    }
    REQUIRE(cli::run({"carleson", "--measure", meas, "--weight", "power:3", "--p", "2", "--q",
                      "2", "--out", out}) == 0);
    const auto rep = json::parse(slurp(out));
    CHECK(rep["results"]["n_atoms"] == 2);
    CHECK(rep["results"]["k_value"].get<double>() > 0.0);
    std::remove(meas.c_str());
    std::remove(out.c_str());
}

TEST_CASE("schatten and density subcommands run end to end") {
    const auto out = tmp_path("schatten.json");
    REQUIRE(cli::run({"schatten", "--symbol", "monomial:1", "--weight", "gauss", "--p", "3",
                      "--sizes", "50,100,200", "--out", out}) == 0);
    const auto rep = json::parse(slurp(out));
    CHECK(rep["results"]["convergent"] == true);
    std::remove(out.c_str());

    const auto out2 = tmp_path("density.json");
    REQUIRE(cli::run({"density", "--fn", "exp_trunc:8", "--weight", "power:3", "--p", "2",
                      "--out", out2}) == 0);
    const auto rep2 = json::parse(slurp(out2));
    CHECK(rep2["results"]["tail_norms"].size() >= 3);
    std::remove(out2.c_str());
}

TEST_CASE("exit codes: usage 2, domain error 1") {
    CHECK(cli::run({"no-such-command"}) == 2);
    CHECK(cli::run({"lp", "--weight", "gauss", "--p", "2"}) == 2); // missing required
    CHECK(cli::run({"lp", "--weight", "power:abc", "--p", "2", "--q", "2", "--fn", "poly:1"}) ==
          1); // ParseError from the weight mini-language
    CHECK(cli::run({"carleson", "--measure", "/nonexistent.csv", "--weight", "gauss", "--p",
                    "2", "--q", "2"}) == 1);
}

TEST_SUITE_END();

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "borndev/cli_config.hpp"
#include "borndev/cli_run.hpp"

using namespace borndev;
using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "borndev");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string(BORNDEV_TEST_DATA_DIR) + "/" + name;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("prob: gaussian on the full line") {
    const auto r = run({"prob", "--state", "gaussian:b=1", "--interval", "-inf,inf",
                        "--alpha", "0.05"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["c1"].get<double>() == 1.0);
    CHECK(j["delta"].get<double>() == 0.0);
    CHECK(j["p_exact"].get<double>() == 1.0);
}

TEST_CASE("delta: step closed form scaled by alpha") {
    const auto r = run({"delta", "--state", "step:H=1,k=2", "--interval", "-0.2,0",
                        "--alpha", "0.1"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["delta"].get<double>() == doctest::Approx(-0.048).epsilon(1e-12));
}

TEST_CASE("config errors exit with code 2 and name the field") {
    const auto bad_interval = run({"prob", "--state", "gaussian:b=1", "--interval", "1,0"});
    CHECK(bad_interval.code == 2);
    CHECK(bad_interval.err.find("interval") != std::string::npos);

    const auto no_state = run({"prob", "--interval", "0,1"});
    CHECK(no_state.code == 2);
    CHECK(no_state.err.find("state") != std::string::npos);

    const auto bad_state = run({"prob", "--state", "triangle:a=1", "--interval", "0,1"});
    CHECK(bad_state.code == 2);

    const auto bad_number = run({"prob", "--state", "gaussian:b=abc", "--interval", "0,1"});
    CHECK(bad_number.code == 2);
}

TEST_CASE("computation errors exit with code 3") {
    // alpha far too large: first-order probability leaves [0,1]
    const auto r = run({"prob", "--state", "step:H=1,k=2", "--interval", "-0.2,0",
                        "--alpha", "1"});
    CHECK(r.code == 3);
}

TEST_CASE("config file with flag override") {
    const auto path = write_temp("config.json", R"({
        "state": "step:H=1,k=2",
        "interval": "-0.2,0",
        "alpha": 0.1
    })");
    const auto from_file = run({"delta", "--config", path});
    REQUIRE(from_file.code == 0);
    CHECK(json::parse(from_file.out)["alpha"].get<double>() == 0.1);

    const auto overridden = run({"delta", "--config", path, "--alpha", "0.2"});
    REQUIRE(overridden.code == 0);
    CHECK(json::parse(overridden.out)["alpha"].get<double>() == 0.2);
    CHECK(json::parse(overridden.out)["delta"].get<double>() ==
          doctest::Approx(-0.096).epsilon(1e-12));
}

TEST_CASE("unknown config fields are rejected") {
    const auto path = write_temp("bad_config.json", R"({"state": "gaussian:b=1", "foo": 1})");
    const auto r = run({"prob", "--config", path, "--interval", "0,1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("foo") != std::string::npos);
}

TEST_CASE("scan: CSV shape and full precision") {
    const auto r = run({"scan", "--state", "gaussian:b=1", "--alpha", "0.1",
                        "--lengths", "0.5:2.5:3"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "L,c1,delta,p_first_order,p_exact");
    int rows = 0;
    std::string row;
    while (std::getline(lines, row))
        if (!row.empty()) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("scan: deterministic byte-for-byte") {
    const std::vector<std::string> args{"scan", "--state", "gaussian:b=0.5", "--alpha",
                                        "0.02", "--lengths", "0.1:4:64"};
    CHECK(run(args).out == run(args).out);
}

TEST_CASE("optimize: analytic comparison for the Gaussian") {
    const auto r = run({"optimize", "--state", "gaussian:b=1", "--alpha", "1e-6"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["length"].get<double>() == doctest::Approx(1.6651092223153954).epsilon(1e-5));
    CHECK(j["analytic_length_max"].get<double>() ==
          doctest::Approx(1.6651092223153954).epsilon(1e-12));
    CHECK(j["analytic_delta_max"].get<double>() == doctest::Approx(4.685e-8).epsilon(1e-3));
    CHECK(!j["degenerate"].get<bool>());

    const auto flat = run({"optimize", "--state", "uniform:H=1", "--alpha", "0.1"});
    REQUIRE(flat.code == 0);
    const json f = json::parse(flat.out);
    CHECK(f["degenerate"].get<bool>());
    CHECK(f.contains("note"));

    const auto off = run({"optimize", "--state", "gaussian:b=1", "--alpha", "0"});
    REQUIRE(off.code == 0);
    CHECK(json::parse(off.out)["degenerate"].get<bool>());
}

TEST_CASE("simulate: emits outcome plus analytic probabilities") {
    const auto r = run({"simulate", "--state", "step:H=1,k=2", "--interval", "-0.2,0",
                        "--alpha", "0.1", "--n", "10000", "--seed", "3"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["n"].get<long>() == 10000);
    CHECK(j["p_born"].get<double>() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(j["p_exact"].get<double>() == doctest::Approx(0.16417910447761194).epsilon(1e-12));
    CHECK(j["hits"].get<long>() ==
          doctest::Approx(j["empirical_p"].get<double>() * 10000).epsilon(1e-9));
}

TEST_CASE("power: sample size plus implied deviation") {
    const auto r = run({"power", "--state", "step:H=1,k=2", "--interval", "-0.2,0",
                        "--alpha", "0.1"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["delta"].get<double>() ==
          doctest::Approx(0.16417910447761194 - 0.2).epsilon(1e-9));
    CHECK(j["n_required"].get<long>() > 0);
}

TEST_CASE("design: both dispersion figures, clearly labeled") {
    const auto r = run({"design", "--m", "10", "--s", "4"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["b_magnitude"].get<double>() == doctest::Approx(1e-12).epsilon(1e-12));
    CHECK(j["b_exact"].get<double>() ==
          doctest::Approx(j["gamma"].get<double>() * j["gamma"].get<double>() * 1e-12)
              .epsilon(1e-12));
    CHECK(j["exponent"].get<int>() == -12);
}

TEST_CASE("JSON reports re-parse to identical values") {
    const auto r = run({"prob", "--state", "gaussian:b=0.37", "--interval", "-0.4,1.3",
                        "--alpha", "0.0123"});
    REQUIRE(r.code == 0);
    const json first = json::parse(r.out);
    const json second = json::parse(first.dump());
    for (const auto& key : {"c1", "c2", "c3", "delta", "p_first_order", "p_exact"})
        CHECK(first[key].get<double>() == second[key].get<double>());
}

TEST_CASE("lengths parser") {
    const auto ls = cli::parse_lengths("1:3:5");
    REQUIRE(ls.size() == 5);
    CHECK(ls.front() == 1.0);
    CHECK(ls.back() == 3.0);
    CHECK(cli::parse_lengths("2:2:1") == std::vector<double>{2.0});
    CHECK_THROWS_AS(cli::parse_lengths("1:3"), ConfigError);
    CHECK_THROWS_AS(cli::parse_lengths("0:3:5"), ConfigError);
    CHECK_THROWS_AS(cli::parse_lengths("3:1:5"), ConfigError);
}

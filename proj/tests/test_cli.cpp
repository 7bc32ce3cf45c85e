#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "sirkit/event_log.hpp"
#include "sirkit/rng.hpp"

using namespace sirkit;
using namespace sirkit::testing;

namespace {

struct CommandResult {
    int exit_code;
    std::string output;
};

CommandResult run_cli(const TempDir& dir, const std::string& args) {
    static int counter = 0;
    const std::string out_file = dir.file("cli_out_" + std::to_string(counter++) + ".txt");
    const std::string command =
        std::string(SIRKIT_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(command.c_str());
    std::ifstream in(out_file);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return CommandResult{WEXITSTATUS(status), buffer.str()};
}

std::string write_baseline(const TempDir& dir) {
    const std::string path = dir.file("baseline.json");
    std::ofstream out(path);
    out << R"({"beta_r": 2.5, "beta_u": 1.5, "p": 0.4, "pi": 0.3, "gamma": 1.0,
               "n": 10000, "i0": 0.001})";
    return path;
}

} // namespace

TEST_CASE("simulate writes a parseable, reproducible event log") {
    TempDir dir;
    const std::string params = write_baseline(dir);
    const std::string log_a = dir.file("a.csv");
    const std::string log_b = dir.file("b.csv");
    CHECK(run_cli(dir, "simulate --params " + params + " --seed 5 --out " + log_a).exit_code == 0);
    CHECK(run_cli(dir, "simulate --params " + params + " --seed 5 --out " + log_b).exit_code == 0);

    const EventLog log = read_event_log_csv(log_a);
    CHECK(log.n == 10000);
    CHECK(log.extinct());

    std::ifstream fa(log_a), fb(log_b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("integrate emits the path header and respects stride") {
    TempDir dir;
    const std::string params = write_baseline(dir);
    const auto result =
        run_cli(dir, "integrate --params " + params + " --t-end 2 --dt 0.01 --stride 100");
    CHECK(result.exit_code == 0);
    CHECK(result.output.rfind("t,S,Ir,Iu,Rr,Ru,intIr\n", 0) == 0);
    std::istringstream in(result.output);
    std::string line;
    int rows = -1; // header
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3); // t = 0, 1, 2
}

TEST_CASE("equivalent prints the zero-immunity construction") {
    TempDir dir;
    const std::string params = write_baseline(dir);
    const auto result = run_cli(dir, "equivalent --params " + params + " --pin pi --value 0");
    REQUIRE(result.exit_code == 0);
    const auto j = nlohmann::json::parse(result.output);
    CHECK(j["equivalent"]["beta_star"].get<double>() == doctest::Approx(1.33).epsilon(1e-12));
    CHECK(j["equivalent"]["p"].get<double>() == doctest::Approx(0.28).epsilon(1e-12));
    CHECK(j["invariants"]["beta_over_p"].get<double>() == doctest::Approx(4.75).epsilon(1e-12));

    // out-of-range pin fails loudly
    const auto bad = run_cli(dir, "equivalent --params " + params + " --pin pi --value 0.9");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("error:") != std::string::npos);
}

TEST_CASE("scan emits constant invariant columns") {
    TempDir dir;
    const auto result = run_cli(dir, "scan --rho 0.33 --zr 0.1263785 --gamma 1 --points 11");
    REQUIRE(result.exit_code == 0);
    std::istringstream in(result.output);
    std::string line;
    std::getline(in, line);
    CHECK(line == "pi,p,beta_star,beta_over_p,beta_times_sfrac");
    double first_inv = -1;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string field;
        for (int i = 0; i < 4; ++i) std::getline(fields, field, ',');
        const double inv = std::stod(field);
        if (first_inv < 0)
            first_inv = inv;
        else
            CHECK(inv == doctest::Approx(first_inv).epsilon(1e-10));
    }
}

TEST_CASE("estimate emits the documented JSON fields") {
    TempDir dir;
    const std::string params = write_baseline(dir);
    const std::string log = dir.file("log.csv");
    REQUIRE(run_cli(dir, "simulate --params " + params + " --seed 12 --out " + log).exit_code == 0);
    const auto result = run_cli(dir, "estimate --log " + log + " --known pi --value 0.3 --gamma 1");
    REQUIRE(result.exit_code == 0);
    const auto j = nlohmann::json::parse(result.output);
    for (const char* key :
         {"rho_hat", "z_r_hat", "z_hat", "supplied", "p_hat", "pi_hat", "beta_star_hat"})
        CHECK(j.contains(key));
    CHECK(j["supplied"]["kind"] == "pi");
    // a single baseline replicate lands in the right neighborhood
    CHECK(j["p_hat"].get<double>() > 0.2);
    CHECK(j["p_hat"].get<double>() < 0.6);
    CHECK(j["beta_star_hat"].get<double>() > 1.5);
    CHECK(j["beta_star_hat"].get<double>() < 2.3);
}

TEST_CASE("lik-check verifies its own derivatives") {
    TempDir dir;
    const std::string params = write_baseline(dir);
    const std::string log = dir.file("log.csv");
    REQUIRE(run_cli(dir, "simulate --params " + params + " --seed 4 --out " + log).exit_code == 0);
    const auto result =
        run_cli(dir, "lik-check --log " + log + " --beta-star 1.9 --p 0.4 --pi 0.3");
    REQUIRE(result.exit_code == 0);
    const auto j = nlohmann::json::parse(result.output);
    CHECK(j["max_rel_err_grad"].get<double>() < 1e-5);
    CHECK(j["max_rel_err_hess"].get<double>() < 1e-4);
    CHECK(j["grad"].size() == 3);
    CHECK(j["hessian"].size() == 3);
    CHECK(j["hessian_fd"].size() == 3);
}

TEST_CASE("experiment writes a report and a rows CSV that reruns identically") {
    TempDir dir;
    const std::string params = write_baseline(dir);
    const std::string base = "experiment --params " + params +
                             " --m 500 --target 5 --seed 99 --branch both --threads 2 --out ";
    REQUIRE(run_cli(dir, base + dir.file("run1")).exit_code == 0);
    REQUIRE(run_cli(dir, base + dir.file("run2")).exit_code == 0);

    std::ifstream r1(dir.file("run1.rows.csv")), r2(dir.file("run2.rows.csv"));
    std::stringstream s1, s2;
    s1 << r1.rdbuf();
    s2 << r2.rdbuf();
    CHECK(s1.str() == s2.str());

    std::ifstream report(dir.file("run1.report.json"));
    REQUIRE(report.good());
    const auto j = nlohmann::json::parse(report);
    CHECK(j["counts"]["ok"].get<int>() == 5);
    CHECK(j["summary"]["p_hat_given_pi"]["count"].get<int>() == 5);
    CHECK(j["rng"] == kRngId);
}

TEST_CASE("bad inputs fail with a clear message") {
    TempDir dir;
    const std::string bad = dir.file("bad.json");
    {
        std::ofstream out(bad);
        out << R"({"beta_r": 2.5, "unknown": 1})";
    }
    const auto result = run_cli(dir, "simulate --params " + bad);
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("unknown key") != std::string::npos);

    const auto missing = run_cli(dir, "simulate");
    CHECK(missing.exit_code == 1);
    CHECK(missing.output.find("--params") != std::string::npos);
}

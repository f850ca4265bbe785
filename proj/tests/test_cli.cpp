#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "quadlin/cli.hpp"
#include "quadlin/errors.hpp"

using namespace quadlin;

namespace {

const std::string kData = QUADLIN_TEST_DATA;

struct Outcome {
    int code;
    std::string out;
    std::string err;
    nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome call(std::vector<std::string> args, std::optional<std::string> env = std::nullopt) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err, env);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check on the exp equation passes") {
    const Outcome o = call({"check", "--eq", data("exp_eq.json")});
    CHECK(o.code == 0);
    const auto j = o.json();
    CHECK(j["passed"] == true);
    CHECK(j["tool"] == "quadlin");
    CHECK(j["command"] == "check");
}

TEST_CASE("check on the product equation fails at condition 2") {
    const Outcome o = call({"check", "--eq", data("product_eq.json")});
    CHECK(o.code == 1);
    CHECK(o.json()["failing_condition"] == 2);
}

TEST_CASE("missing files and bad usage exit 2") {
    const Outcome missing = call({"check", "--eq", data("missing.json")});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("file not found") != std::string::npos);
    CHECK(call({"check", "--eq", data("exp_eq.json"), "--format", "xml"}).code == 2);
    CHECK(call({"check", "--eq", data("exp_eq.json"), "--tol", "nope=1"}).code == 2);
    CHECK(call({"check", "--eq", data("exp_eq.json"), "--tol", "check=-1"}).code == 2);
    CHECK(call({"check", "--eq", data("exp_eq.json"), "--grid", "3by4"}).code == 2);
    CHECK(call({"frobnicate", "--eq", data("exp_eq.json")}).code == 2);
    CHECK(call({"check"}).code == 2);
    CHECK(call({"check", "--eq", data("exp_eq.json"), "--format", "csv"}).code == 2);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("reports are byte-identical across runs") {
    for (const char* cmd : {"check", "transform", "entropy"}) {
        const std::vector<std::string> args{cmd, "--eq", data("harmonic_eq.json"), "--seed", "5", "--depth", "5"};
        CHECK(call(args).out == call(args).out);
    }
}

TEST_CASE("exit code follows the verdict") {
    for (const char* eq : {"exp_eq.json", "product_eq.json", "harmonic_eq.json", "linear_eq.json", "cross_eq.json"}) {
        const Outcome o = call({"check", "--eq", data(eq)});
        CHECK((o.code == 0) == o.json()["passed"].get<bool>());
    }
}

TEST_CASE("tolerances and seeds") {
    const Outcome o = call({"check", "--eq", data("exp_eq.json"), "--tol", "check=1e-9"});
    CHECK(o.json()["tolerances"]["check"] == 1e-9);
    CHECK(call({"check", "--eq", data("exp_eq.json")}, "17").json()["seed"] == 17);
    CHECK(call({"check", "--eq", data("exp_eq.json"), "--seed", "3"}, "17").json()["seed"] == 3);
    CHECK(call({"check", "--eq", data("exp_eq.json")}, "x").code == 2);
}

TEST_CASE("transform and roundtrip") {
    const Outcome t = call({"transform", "--eq", data("exp213_eq.json")});
    CHECK(t.code == 0);
    CHECK(t.json()["certified"] == true);
    CHECK(t.json()["model"]["p"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));

    const Outcome r = call({"roundtrip", "--eq", data("exp_eq.json"), "--grid", "12x9"});
    CHECK(r.code == 0);
    CHECK(r.json()["roundtrip"]["m"] == 9);
    CHECK(r.json()["roundtrip"]["discrepancy"].get<double>() <= 1e-6);

    CHECK(call({"transform", "--eq", data("product_eq.json")}).code == 1);
}

TEST_CASE("entropy") {
    const Outcome lin = call({"entropy", "--eq", data("linear_eq.json"), "--depth", "6"});
    CHECK(lin.code == 0);
    CHECK(lin.json()["classification"] == "constant");
    const Outcome csv = call({"entropy", "--eq", data("harmonic_eq.json"), "--depth", "4", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(csv.out == "k,degree\n1,3\n2,5\n3,7\n4,9\n");
    CHECK(call({"entropy", "--eq", data("cross_eq.json"), "--depth", "6"}).code == 1);
    CHECK(call({"entropy", "--eq", data("exp_eq.json")}).code == 2);
}

TEST_CASE("colehopf families") {
    for (const char* f : {"g8_family.json", "rosa_family.json", "canonical_family.json"}) {
        const Outcome o = call({"colehopf", "--eq", data(f)});
        INFO(f << ": " << o.err);
        CHECK(o.code == 0);
        CHECK(o.json()["passed"] == true);
    }
    CHECK(call({"colehopf", "--eq", data("exp_eq.json")}).code == 2);
}

TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "quadlin_cli_test.json";
    const Outcome o = call({"check", "--eq", data("linear_eq.json"), "--out", path.string()});
    CHECK(o.code == 0);
    CHECK(o.out.empty());
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    CHECK(j["passed"] == true);
    std::filesystem::remove(path);
}

TEST_CASE("error classes map to exit codes") {
    CHECK(exit_code_for(SyntaxError(0, "x")) == 2);
    CHECK(exit_code_for(RankDeficient("x")) == 3);
    CHECK(exit_code_for(CertificationFailure("x")) == 1);
}

}

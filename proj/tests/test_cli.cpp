#include "doctest.h"

#include <sstream>

#include "json.hpp"
#include "qdl/cli.hpp"

using namespace qdl;

namespace {
struct Run {
    int code;
    std::string out, err;
};
Run run(std::vector<std::string> args) {
    std::ostringstream o, e;
    int c = run_cli(args, o, e);
    return {c, o.str(), e.str()};
}
}  // namespace

TEST_CASE("count") {
    auto r = run({"count", "--form", "1,1,-1,-1", "--bound", "1"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == 33);
    CHECK(j["schema_version"] == 1);
    CHECK(run({"count", "--form", "1,1,-1,-1", "--energy", "4", "--method", "brute"}).code == 0);
    CHECK(run({"count", "--form", "1,1,-1,-1"}).code == 2);
}

TEST_CASE("expsum and friends") {
    auto r = run({"expsum", "--form", "1,1,1,-1", "--q", "3", "--c", "0,0,0,0"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["rounded"] == -18);
    CHECK(nlohmann::json::parse(run({"expsum", "--form", "1,1,1,-1", "--q", "3", "--method", "closed"}).out)["rounded"] == -18);
    CHECK(run({"expsum", "--form", "1,1,1,-1", "--q", "4", "--method", "closed"}).code == 2);
    CHECK(run({"expsum", "--form", "1,1,1,-1", "--q", "9000"}).code == 1);
    CHECK(run({"lseries", "--form", "1,1,1,-1", "--s", "2"}).code == 0);
    CHECK(run({"density", "--form", "1,1,1,-1", "--p", "3"}).code == 0);
    CHECK(run({"integral", "--form", "1,-1,-1", "--B", "3", "--q", "4", "--c", "1,0,0"}).code == 0);
}

TEST_CASE("usage errors") {
    auto r = run({});
    CHECK(r.code == 2);
    CHECK(r.err.find("Subcommands") != std::string::npos);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"count", "--form", "1,0,-1", "--bound", "2"}).code == 2);
    CHECK(run({"count", "--form", "1,2,3", "--bound", "2"}).code == 2);
    CHECK(run({"expsum", "--form", "1,1,1,-1", "--c", "1,2"}).code == 2);
}

TEST_CASE("selftest subset") {
    auto r = run({"selftest", "--only", "7"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("PASS criterion 7", 0) == 0);
}

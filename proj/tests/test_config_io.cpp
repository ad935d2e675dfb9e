#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <random>
#include <string>

#include "nehari/config.hpp"
#include "nehari/field_io.hpp"

using namespace nehari;

namespace {

std::string tmpfile_path(const char* name) {
    return std::string("/tmp/nehari_test_") + name + ".csv";
}

} // namespace

TEST_CASE("minimal config gets defaults filled") {
    RunConfig cfg = parse_config("cross_section = disk 1\n");
    CHECK(cfg.ell == 1);
    CHECK(cfg.N == 3);
    CHECK(cfg.p == doctest::Approx(6.0));
    CHECK(cfg.q == doctest::Approx(4.0)); // (p+2)/2
    CHECK(cfg.mu == 1.0);
    CHECK(cfg.lambda == 0.0);
    CHECK(cfg.h == 0.1);
    CHECK(cfg.family == Family::straight);
}

TEST_CASE("comments, blanks, and whitespace are tolerated") {
    RunConfig cfg = parse_config("# a comment\n\n  cross_section =   square 1 \n h=0.05\n");
    CHECK(cfg.cross_kind == CrossKind::square);
    CHECK(cfg.h == 0.05);
}

TEST_CASE("q >= p is rejected with the constraint message") {
    try {
        parse_config("cross_section = disk 1\nq = 7\np = 6\n");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parse_error);
        CHECK(std::string(e.what()).find("require 2 < q < p") != std::string::npos);
    }
}

TEST_CASE("bump family without m is a missing-key error") {
    try {
        parse_config("cross_section = disk 1\nfamily = bump\na0 = 0.5\n");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("requires key 'm'") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected with their line numbers") {
    std::vector<ConfigError> errors;
    RunConfig cfg;
    bool ok = try_parse_config("cross_section = disk 1\nnot_a_key = 3\n", {}, cfg, errors);
    CHECK_FALSE(ok);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].line == 2);
    CHECK(errors[0].message.find("unknown key") != std::string::npos);
}

TEST_CASE("type mismatches carry line numbers") {
    std::vector<ConfigError> errors;
    RunConfig cfg;
    bool ok = try_parse_config("h = fast\ncross_section = disk 1\n", {}, cfg, errors);
    CHECK_FALSE(ok);
    REQUIRE(!errors.empty());
    CHECK(errors[0].line == 1);
    CHECK(errors[0].message.find("expected a number") != std::string::npos);
}

TEST_CASE("multiple errors are all reported") {
    std::vector<ConfigError> errors;
    RunConfig cfg;
    try_parse_config("h = -1\nq = 9\np = 6\nmystery = 1\ncross_section = disk 1\n", {},
                     cfg, errors);
    CHECK(errors.size() >= 3);
}

TEST_CASE("overrides replace file values and are validated") {
    RunConfig cfg = parse_config("cross_section = disk 1\nh = 0.2\n", {"h=0.05", "q=5.5"});
    CHECK(cfg.h == 0.05);
    CHECK(cfg.q == 5.5);
    CHECK_THROWS_AS(parse_config("cross_section = disk 1\n", {"nonsense"}), Error);
}

TEST_CASE("N consistency with ell and the cross-section is enforced") {
    CHECK_THROWS_AS(parse_config("cross_section = disk 1\nN = 5\n"), Error);
    RunConfig cfg = parse_config("cross_section = disk 1\nN = 3\n");
    CHECK(cfg.N == 3);
}

TEST_CASE("interval cross-section takes two endpoints") {
    RunConfig cfg = parse_config("cross_section = interval 0 1\np = 4\nq = 3\n");
    CHECK(cfg.cross_kind == CrossKind::interval);
    CHECK(cfg.N == 2);
    CrossSection F = cfg.cross_section();
    CHECK(F.dim() == 1);
}

TEST_CASE("resolved config echo is deterministic") {
    RunConfig a = parse_config("cross_section = disk 1\nq = 5.5\n");
    RunConfig b = parse_config("cross_section = disk 1\nq = 5.5\n");
    CHECK(a.to_json_object() == b.to_json_object());
}

TEST_CASE("field dump round trip is bit exact") {
    DomainSpec dom =
        make_domain(1, CrossSection::make_interval(0.0, 1.0), Family::straight, 3.0);
    auto grid = discretize(dom, 0.1);
    std::mt19937 rng(9001);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field u(grid);
    for (auto& v : u.values) v = dist(rng) * std::pow(10.0, dist(rng) * 8.0);
    std::string path = tmpfile_path("roundtrip");
    write_field(path, u);
    Field back = read_field(grid, path);
    for (std::size_t k = 0; k < u.size(); ++k) {
        // bit-exact round trip through the 17-digit decimal form
        CHECK(back[k] == u[k]);
    }
    std::remove(path.c_str());
}

TEST_CASE("header mismatch raises a dimension error") {
    DomainSpec dom =
        make_domain(1, CrossSection::make_interval(0.0, 1.0), Family::straight, 3.0);
    auto grid = discretize(dom, 0.1);
    auto other = discretize(dom, 0.05);
    Field u(grid);
    std::string path = tmpfile_path("mismatch");
    write_field(path, u);
    try {
        read_field(other, path);
        FAIL("expected dimension error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::dimension_mismatch);
    }
    std::remove(path.c_str());
}

TEST_CASE("empty file raises a malformed-header error") {
    std::string path = tmpfile_path("empty");
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fclose(f);
    DomainSpec dom =
        make_domain(1, CrossSection::make_interval(0.0, 1.0), Family::straight, 3.0);
    auto grid = discretize(dom, 0.2);
    try {
        read_field(grid, path);
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io_error);
        CHECK(std::string(e.what()).find("header") != std::string::npos);
    }
    std::remove(path.c_str());
}

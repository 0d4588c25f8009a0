#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "hyperscatter/config.hpp"
#include "hyperscatter/emit.hpp"
#include "hyperscatter/errors.hpp"

using namespace hyperscatter;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::current_path() / "config_emit_tmp") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) {
        const fs::path p = path / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p.string();
    }
};

bool mentions(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("hash follows the published 64-bit FNV-1a vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("defaults validate and hash deterministically") {
    RunConfig cfg;
    CHECK_NOTHROW(validate_config(cfg));
    const std::string h1 = config_hash(cfg);
    const std::string h2 = config_hash(cfg);
    CHECK(h1 == h2);
    CHECK(h1.size() == 16);

    RunConfig other;
    other.c = 2.0;
    CHECK(config_hash(other) != h1);
}

TEST_CASE("output prefix does not enter the computation identity") {
    RunConfig a, b;
    a.output = "first_prefix";
    b.output = "second_prefix";
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_echo(a).find("output") == std::string::npos);
    CHECK(config_echo(a).find("k_count=16\n") != std::string::npos);
}

TEST_CASE("config file parsing: comments, spacing, precedence") {
    TempDir tmp;
    const std::string path = tmp.file("run.cfg",
                                      "# full-line comment\n"
                                      "c = 2.5\n"
                                      "\n"
                                      "k=0.01   # inline comment\n"
                                      "  mode =  both \n");
    RunConfig cfg = parse_config_file(path);
    CHECK(cfg.c == 2.5);
    CHECK(cfg.k == 0.01);
    CHECK(cfg.mode == "both");
    CHECK(cfg.q == 100.0);  // untouched keys keep their defaults

    // Flags are applied on top of the file.
    apply_key_value(cfg, "k", "0.02");
    CHECK(cfg.k == 0.02);
}

TEST_CASE("config file parsing: failure modes name the offender") {
    TempDir tmp;
    CHECK_THROWS_AS(parse_config_file((tmp.path / "absent.cfg").string()),
                    ConfigError);

    try {
        parse_config_file(tmp.file("bad1.cfg", "c = 1\nbogus = 2\n"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "unknown key 'bogus'"));
    }
    try {
        parse_config_file(tmp.file("bad2.cfg", "k = fast\n"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "non-numeric"));
    }
    try {
        parse_config_file(tmp.file("bad3.cfg", "k = 1.5x\n"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "trailing junk"));
    }
    try {
        parse_config_file(tmp.file("bad4.cfg", "c = 1\n\nnot a pair\n"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "line 3"));
    }
}

TEST_CASE("validation names the violated inequality") {
    auto expect_violation = [](void (*mutate)(RunConfig&),
                               const std::string& needle) {
        RunConfig cfg;
        mutate(cfg);
        try {
            validate_config(cfg);
            FAIL_CHECK("expected a ConfigError naming the violation");
        } catch (const ConfigError& e) {
            CHECK(mentions(e, needle));
        }
    };
    expect_violation([](RunConfig& c) { c.r0 = 0.2; }, "r0*c <= 0.05");
    expect_violation([](RunConfig& c) { c.k_count = 7; }, "k_count >= 8");
    expect_violation([](RunConfig& c) { c.tolerance = 1e-3; },
                     "1e-14 <= tolerance <= 1e-6");
    expect_violation([](RunConfig& c) { c.channels = 9; },
                     "1 <= channels <= 8");
    expect_violation([](RunConfig& c) { c.b = 1.5; }, "|b| <= 1");
    expect_violation([](RunConfig& c) { c.mode = "fast"; },
                     "numeric|analytic|both");
    expect_violation([](RunConfig& c) { c.format = "xml"; }, "csv|json");
    expect_violation([](RunConfig& c) { c.report_nodes = 10; },
                     "report_nodes >= 64");
    expect_violation([](RunConfig& c) { c.k_min = 0.5; },
                     "0 < k_min < k_max");
}

TEST_CASE("float rendering survives a round trip") {
    for (double v : {1.0 / 3.0, 1e-300, 6.02214076e23, 3.14159265358979323846,
                     -2.2250738585072014e-308, 0.0, -17.25}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("csv rendering is byte-stable") {
    Table t;
    t.columns = {"x", "y"};
    t.rows = {{1.0, 0.5}, {2.0, 1.0 / 3.0}};
    const std::string csv = table_to_csv(t, "0123456789abcdef");
    CHECK(csv ==
          "# config_hash=0123456789abcdef\n"
          "x,y\n"
          "1,0.5\n"
          "2,0.33333333333333331\n");
    CHECK(table_to_csv(t, "0123456789abcdef") == csv);

    Table ragged = t;
    ragged.rows.push_back({1.0});
    CHECK_THROWS_AS(table_to_csv(ragged, "h"), ConfigError);
    CHECK_THROWS_AS(table_to_json(ragged, "h"), ConfigError);
}

TEST_CASE("json rendering carries the hash, columns and rows") {
    Table t;
    t.columns = {"a"};
    t.rows = {{0.25}};
    const std::string js = table_to_json(t, "feedfacefeedface");
    CHECK(js.find("\"config_hash\": \"feedfacefeedface\"") != std::string::npos);
    CHECK(js.find("\"columns\"") != std::string::npos);
    CHECK(js.find("\"0.25\"") != std::string::npos);
    CHECK(js.back() == '\n');
}

TEST_CASE("write_table picks the extension from the format") {
    TempDir tmp;
    Table t;
    t.columns = {"v"};
    t.rows = {{1.5}};
    const std::string stem = (tmp.path / "out").string();
    CHECK(write_table(stem, "csv", t, "h") == stem + ".csv");
    CHECK(write_table(stem, "json", t, "h") == stem + ".json");
    CHECK(read_text_file(stem + ".csv").substr(0, 1) == "#");
}

TEST_CASE("manifest round trip verifies and detects tampering") {
    TempDir tmp;
    RunConfig cfg;
    const std::string f1 = tmp.file("alpha.csv", "x\n1\n");
    const std::string f2 = tmp.file("beta.csv", "y\n2\n");
    const std::string manifest = (tmp.path / "run_manifest.json").string();
    write_manifest(manifest, cfg, {f1, f2});

    CHECK(verify_manifest(manifest).empty());

    // Content tampering is caught per file.
    tmp.file("beta.csv", "y\n3\n");
    auto problems = verify_manifest(manifest);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("beta.csv") != std::string::npos);

    // A missing file is reported as such.
    fs::remove(tmp.path / "alpha.csv");
    problems = verify_manifest(manifest);
    REQUIRE(problems.size() == 2);

    // Tampering with the embedded config invalidates the recorded hash.
    std::string doc = read_text_file(manifest);
    const std::string needle = "\"c\": \"1\"";
    const auto at = doc.find(needle);
    REQUIRE(at != std::string::npos);
    doc.replace(at, needle.size(), "\"c\": \"3\"");
    write_text_file(manifest, doc);
    tmp.file("alpha.csv", "x\n1\n");
    tmp.file("beta.csv", "y\n2\n");
    problems = verify_manifest(manifest);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("config_hash") != std::string::npos);

    // Garbage JSON is rejected outright.
    write_text_file(manifest, "not json");
    CHECK_THROWS_AS(verify_manifest(manifest), ConfigError);
}

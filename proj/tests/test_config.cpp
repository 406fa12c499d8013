#include <doctest.h>

#include <filesystem>
#include <functional>
#include <string>

#include "mml/config.hpp"
#include "mml/error.hpp"
#include "mml/io.hpp"

using namespace mml;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    REQUIRE(false);
    return ErrorKind::invalid_domain;
}

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    REQUIRE(false);
    return {};
}

const std::string kSample =
    "# experiment description\n"
    "title = demo\n"
    "\n"
    "[domain]\n"
    "n = 2\n"
    "lo = -1.5, -1.5\n"
    "hi = 1.5, 1.5          ; box corners\n"
    "t_end = 0.5\n"
    "\n"
    "[schedule]\n"
    "resolutions = 16, 32, 64\n"
    "drift = 1.25\n"
    "double_corpus = true\n";

}  // namespace

TEST_CASE("config parses sections, comments, and typed values") {
    const ExperimentConfig cfg = ExperimentConfig::parse(kSample, "<test>");

    CHECK(cfg.get_string("title") == "demo");
    CHECK(cfg.get_int("domain.n") == 2);
    CHECK(cfg.get_real("domain.t_end") == 0.5);
    CHECK(cfg.get_bool("schedule.double_corpus"));
    CHECK(cfg.get_real_list("domain.lo") == std::vector<double>{-1.5, -1.5});
    CHECK(cfg.get_real_list("domain.hi") == std::vector<double>{1.5, 1.5});
    CHECK(cfg.get_int_list("schedule.resolutions") == std::vector<std::int64_t>{16, 32, 64});
    CHECK(cfg.get_real("schedule.drift") == 1.25);

    CHECK(cfg.has("domain.n"));
    CHECK_FALSE(cfg.has("domain.missing"));
    CHECK(cfg.keys() == std::vector<std::string>{"domain.hi", "domain.lo", "domain.n",
                                                 "domain.t_end", "schedule.double_corpus",
                                                 "schedule.drift", "schedule.resolutions",
                                                 "title"});

    SUBCASE("defaulted getters") {
        CHECK(cfg.get_int("domain.cells", 48) == 48);
        CHECK(cfg.get_real("schedule.slack", 1.1) == 1.1);
        CHECK(cfg.get_string("title", "other") == "demo");
        CHECK_FALSE(cfg.get_bool("schedule.quiet", false));
        CHECK(cfg.get_real_list("domain.absent").empty());
        CHECK(cfg.get_int_list("schedule.absent").empty());
    }

    SUBCASE("booleans accept the usual spellings") {
        const ExperimentConfig b = ExperimentConfig::parse(
            "a = true\nb = false\nc = yes\nd = no\ne = on\nf = off\ng = 1\nh = 0\n", "<test>");
        CHECK(b.get_bool("a"));
        CHECK_FALSE(b.get_bool("b"));
        CHECK(b.get_bool("c"));
        CHECK_FALSE(b.get_bool("d"));
        CHECK(b.get_bool("e"));
        CHECK_FALSE(b.get_bool("f"));
        CHECK(b.get_bool("g"));
        CHECK_FALSE(b.get_bool("h"));
    }
}

TEST_CASE("config diagnostics name the location and the key") {
    auto parse_kind = [](const std::string& text) {
        return kind_of([&] { ExperimentConfig::parse(text, "exp.cfg"); });
    };

    SUBCASE("syntax errors carry file and line") {
        CHECK(parse_kind("a = 1\nwhat is this\n") == ErrorKind::config_error);
        const std::string msg =
            message_of([&] { ExperimentConfig::parse("a = 1\nwhat is this\n", "exp.cfg"); });
        CHECK(msg.find("exp.cfg:2") != std::string::npos);
    }
    SUBCASE("bad section header") {
        CHECK(parse_kind("[unterminated\n") == ErrorKind::config_error);
        CHECK(parse_kind("[]\n") == ErrorKind::config_error);
    }
    SUBCASE("bad key name") { CHECK(parse_kind("a b = 1\n") == ErrorKind::config_error); }
    SUBCASE("duplicate keys") {
        CHECK(parse_kind("a = 1\na = 2\n") == ErrorKind::config_error);
        CHECK(parse_kind("[s]\na = 1\na = 2\n") == ErrorKind::config_error);
        const std::string msg = message_of(
            [&] { ExperimentConfig::parse("[s]\na = 1\na = 2\n", "exp.cfg"); });
        CHECK(msg.find("exp.cfg:3") != std::string::npos);
        CHECK(msg.find("s.a") != std::string::npos);
    }
    SUBCASE("same key in different sections is fine") {
        const ExperimentConfig cfg =
            ExperimentConfig::parse("[s]\na = 1\n[t]\na = 2\n", "<test>");
        CHECK(cfg.get_int("s.a") == 1);
        CHECK(cfg.get_int("t.a") == 2);
    }
    SUBCASE("missing required key names the key") {
        const ExperimentConfig cfg = ExperimentConfig::parse("a = 1\n", "exp.cfg");
        const std::string msg = message_of([&] { cfg.get_int("domain.n"); });
        CHECK(kind_of([&] { cfg.get_int("domain.n"); }) == ErrorKind::config_error);
        CHECK(msg.find("domain.n") != std::string::npos);
    }
    SUBCASE("malformed values name the key and the text") {
        const ExperimentConfig cfg =
            ExperimentConfig::parse("a = soon\nb = 1.5\nc = 2x\nl = 1, ,3\n", "<test>");
        CHECK(kind_of([&] { cfg.get_real("a"); }) == ErrorKind::config_error);
        CHECK(kind_of([&] { cfg.get_int("b"); }) == ErrorKind::config_error);
        CHECK(kind_of([&] { cfg.get_int("c"); }) == ErrorKind::config_error);
        CHECK(kind_of([&] { cfg.get_bool("a"); }) == ErrorKind::config_error);
        CHECK(kind_of([&] { cfg.get_real_list("l"); }) == ErrorKind::config_error);
        const std::string msg = message_of([&] { cfg.get_real("a"); });
        CHECK(msg.find("'a'") != std::string::npos);
        CHECK(msg.find("soon") != std::string::npos);
    }
    SUBCASE("missing file") {
        CHECK(kind_of([] { ExperimentConfig::parse_file("/nonexistent.cfg"); }) ==
              ErrorKind::io_error);
    }
}

TEST_CASE("config hash ignores layout but sees content") {
    const ExperimentConfig base = ExperimentConfig::parse(kSample, "<a>");

    SUBCASE("reordering sections and keys preserves the hash") {
        const std::string reordered =
            "title = demo\n"
            "[schedule]\n"
            "double_corpus = true\n"
            "drift = 1.25\n"
            "resolutions = 16, 32, 64\n"
            "[domain]\n"
            "t_end = 0.5\n"
            "hi = 1.5, 1.5\n"
            "lo = -1.5, -1.5\n"
            "n = 2\n";
        const ExperimentConfig other = ExperimentConfig::parse(reordered, "<b>");
        CHECK(other.hash() == base.hash());
        CHECK(other.keys() == base.keys());
    }
    SUBCASE("comments and spacing do not matter") {
        const ExperimentConfig spaced = ExperimentConfig::parse(
            "title=demo   # same content\n[domain]\nn=2\nlo=-1.5, -1.5\nhi=1.5, 1.5\n"
            "t_end=0.5\n[schedule]\nresolutions=16, 32, 64\ndrift=1.25\ndouble_corpus=true\n",
            "<c>");
        CHECK(spaced.hash() == base.hash());
    }
    SUBCASE("changing a value changes the hash") {
        std::string tweaked = kSample;
        const auto pos = tweaked.find("drift = 1.25");
        tweaked.replace(pos, 12, "drift = 1.35");
        CHECK(ExperimentConfig::parse(tweaked, "<d>").hash() != base.hash());
    }
    SUBCASE("moving a key between sections changes the hash") {
        CHECK(ExperimentConfig::parse("[s]\na = 1\n", "<e>").hash() !=
              ExperimentConfig::parse("[t]\na = 1\n", "<f>").hash());
    }
    SUBCASE("overrides land in the entries and the hash") {
        ExperimentConfig cfg = ExperimentConfig::parse(kSample, "<g>");
        cfg.set("schedule.drift", "1.5");
        CHECK(cfg.get_real("schedule.drift") == 1.5);
        CHECK(cfg.hash() != base.hash());
        cfg.set("corpus.seed", "7");
        CHECK(cfg.get_int("corpus.seed") == 7);
    }
}

TEST_CASE("run manifest serializes its record") {
    RunManifest m;
    m.config_hash = 0x1234abcd5678ef00ULL;
    m.artifact_version = "0.1.0";
    m.add_stage("parse", 0.5);
    m.add_stage("verify", 12.25);
    m.add_output("report.csv");
    m.add_output("summary.json");

    const std::string text = m.json();
    CHECK(text.find("\"config_hash\": \"1234abcd5678ef00\"") != std::string::npos);
    CHECK(text.find("\"artifact_version\": \"0.1.0\"") != std::string::npos);
    CHECK(text.find("\"name\": \"verify\"") != std::string::npos);
    CHECK(text.find("\"wall_seconds\": 12.25") != std::string::npos);
    CHECK(text.find("report.csv") != std::string::npos);
    CHECK(text.find("summary.json") != std::string::npos);
    CHECK(text.back() == '\n');
}

#include "hcdht/dao_scenario.hpp"

#include <doctest.h>

#include <sstream>

using namespace hcdht::dao;

namespace {

std::vector<std::string> run(const std::string& text, Dao& dao) {
    std::istringstream in(text);
    return run_scenario(in, dao);
}

}  // namespace

TEST_CASE("tokenizer") {
    CHECK(tokenize("  mint  a 10 ") == std::vector<std::string>{"mint", "a", "10"});
    CHECK(tokenize("propose a 10 \"two words\" r 5") ==
          std::vector<std::string>{"propose", "a", "10", "two words", "r", "5"});
    CHECK(tokenize("tick 3 # later") == std::vector<std::string>{"tick", "3"});
    CHECK(tokenize("suggest 1 a \"has # inside\"") ==
          std::vector<std::string>{"suggest", "1", "a", "has # inside"});
    CHECK(tokenize("suggest 1 a \"\"") == std::vector<std::string>{"suggest", "1", "a", ""});
    CHECK(tokenize("# only a comment").empty());
    CHECK_THROWS_AS(tokenize("propose a 1 \"open"), hcdht::Error);
}

TEST_CASE("mint, lock, tick, release restores the balance") {
    Dao dao;
    const auto log = run(
        "mint a 100\n"
        "lock a 60 +5\n"
        "tick 5\n"
        "release 1\n",
        dao);
    CHECK(log.size() == 4);
    CHECK(log[1] == "2: lock 1 a 60 until 5");
    CHECK(dao.balance("a") == 100);
    CHECK(dao.conserved());
}

TEST_CASE("full lifecycle prints the winner") {
    Dao dao;
    const auto log = run(
        "mint alice 100\n"
        "mint bob 50\n"
        "mint treasury 200\n"
        "lock alice 100 1000\n"
        "lock bob 50 1000\n"
        "\n"
        "propose alice +100 \"grant for indexing\" carol 80\n"
        "suggest 1 alice \"index more\"\n"
        "suggest 1 bob \"crawl first\"\n"
        "vote 1 1 alice\n"
        "vote 1 2 bob\n"
        "tick 100\n"
        "execute 1\n",
        dao);
    CHECK(log.back() == "13: execute 1 winner 1");
    CHECK(log[8] == "10: vote alice -> proposal 1 suggestion 1 weight 100");
    CHECK(dao.balance("carol") == 80);
    CHECK(dao.balance("treasury") == 120);
}

TEST_CASE("vote after debate end aborts at that line") {
    Dao dao;
    try {
        run("mint a 10\n"
            "lock a 10 100\n"
            "propose a 5 \"x\"\n"
            "suggest 1 a y\n"
            "tick 5\n"
            "vote 1 1 a\n"
            "tick 1\n",
            dao);
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 6);
        CHECK(std::string(e.what()).find("ClosedProposal") != std::string::npos);
    }
    CHECK(dao.now() == 5);
}

TEST_CASE("parse errors carry the line number") {
    Dao dao;
    auto line_of = [&](const std::string& text) -> std::size_t {
        try {
            run(text, dao);
        } catch (const ScenarioError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("mint a 1\nfly a\n") == 2);
    CHECK(line_of("tick x\n") == 1);
    CHECK(line_of("mint a\n") == 1);
    CHECK(line_of("\n\nlock a 1 +\n") == 3);
    CHECK(line_of("tick 1 # ok\n") == 0);
}

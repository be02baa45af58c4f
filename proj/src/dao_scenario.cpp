#include "hcdht/dao_scenario.hpp"

#include <charconv>
#include <functional>
#include <limits>
#include <map>

namespace hcdht::dao {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> words;
    std::string current;
    bool quoted = false;
    bool have_word = false;
    for (char c : line) {
        if (quoted) {
            if (c == '"') {
                quoted = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
            have_word = true;
        } else if (c == '#') {
            break;
        } else if (c == ' ' || c == '\t' || c == '\r') {
            if (have_word) words.push_back(std::move(current));
            current.clear();
            have_word = false;
        } else {
            current += c;
            have_word = true;
        }
    }
    if (quoted) throw Error("unterminated quote");
    if (have_word) words.push_back(std::move(current));
    return words;
}

namespace {

std::uint64_t parse_number(const std::string& text, const char* what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(std::string("expected ") + what + ", got '" + text + "'");
    }
    return value;
}

Timestamp parse_time(const std::string& text, const Dao& dao) {
    if (!text.empty() && text.front() == '+') {
        const std::uint64_t delta = parse_number(text.substr(1), "relative time");
        if (delta > std::numeric_limits<Timestamp>::max() - dao.now()) throw Error("time overflow");
        return dao.now() + delta;
    }
    return parse_number(text, "timestamp");
}

using Args = std::vector<std::string>;
using Handler = std::function<std::string(const Args&, Dao&)>;

void expect_args(const Args& args, std::size_t min, std::size_t max, const char* usage) {
    const std::size_t n = args.size() - 1;
    if (n < min || n > max) throw Error(std::string("usage: ") + usage);
}

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table{
        {"mint",
         [](const Args& a, Dao& dao) {
             expect_args(a, 2, 2, "mint <account> <amount>");
             dao.mint(a[1], parse_number(a[2], "amount"));
             return "mint " + a[1] + " " + a[2];
         }},
        {"transfer",
         [](const Args& a, Dao& dao) {
             expect_args(a, 3, 3, "transfer <from> <to> <amount>");
             dao.transfer(a[1], a[2], parse_number(a[3], "amount"));
             return "transfer " + a[1] + " -> " + a[2] + " " + a[3];
         }},
        {"lock",
         [](const Args& a, Dao& dao) {
             expect_args(a, 3, 3, "lock <owner> <amount> <release-time>");
             const Timestamp until = parse_time(a[3], dao);
             const LockId id = dao.lock_tokens(a[1], parse_number(a[2], "amount"), until);
             return "lock " + std::to_string(id) + " " + a[1] + " " + a[2] + " until " +
                    std::to_string(until);
         }},
        {"release",
         [](const Args& a, Dao& dao) {
             expect_args(a, 1, 1, "release <lock-id>");
             dao.release(parse_number(a[1], "lock id"));
             return "release " + a[1];
         }},
        {"tick",
         [](const Args& a, Dao& dao) {
             expect_args(a, 1, 1, "tick <seconds>");
             dao.tick(parse_number(a[1], "seconds"));
             return "tick " + a[1] + " clock=" + std::to_string(dao.now());
         }},
        {"propose",
         [](const Args& a, Dao& dao) {
             if (a.size() != 4 && a.size() != 6) {
                 throw Error("usage: propose <proposer> <debate-end> <description> [<recipient> <amount>]");
             }
             const Timestamp end = parse_time(a[2], dao);
             std::optional<TransferPayload> payload;
             if (a.size() == 6) payload = TransferPayload{a[4], parse_number(a[5], "amount")};
             const ProposalId id = dao.submit_proposal(a[1], a[3], end, payload);
             return "proposal " + std::to_string(id) + " by " + a[1] + " debate ends " +
                    std::to_string(end);
         }},
        {"suggest",
         [](const Args& a, Dao& dao) {
             expect_args(a, 3, 3, "suggest <proposal-id> <author> <content>");
             const ProposalId p = parse_number(a[1], "proposal id");
             const SuggestionId id = dao.submit_suggestion(p, a[2], a[3]);
             return "suggestion " + std::to_string(id) + " on proposal " + a[1] + " by " + a[2];
         }},
        {"vote",
         [](const Args& a, Dao& dao) {
             expect_args(a, 3, 3, "vote <proposal-id> <suggestion-id> <voter>");
             const ProposalId p = parse_number(a[1], "proposal id");
             const SuggestionId s = parse_number(a[2], "suggestion id");
             dao.vote(p, s, a[3]);
             const Amount weight = dao.proposal(p).suggestions[s - 1].votes.at(a[3]);
             return "vote " + a[3] + " -> proposal " + a[1] + " suggestion " + a[2] + " weight " +
                    std::to_string(weight);
         }},
        {"execute",
         [](const Args& a, Dao& dao) {
             expect_args(a, 1, 1, "execute <proposal-id>");
             const auto winner = dao.execute_proposal(parse_number(a[1], "proposal id"));
             return "execute " + a[1] + " winner " + (winner ? std::to_string(*winner) : "none");
         }},
    };
    return table;
}

}  // namespace

std::vector<std::string> run_scenario(std::istream& in, Dao& dao) {
    std::vector<std::string> log;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        try {
            const Args args = tokenize(line);
            if (args.empty()) continue;
            auto it = handlers().find(args[0]);
            if (it == handlers().end()) throw Error("unknown operation '" + args[0] + "'");
            log.push_back(std::to_string(number) + ": " + it->second(args, dao));
        } catch (const Error& e) {
            throw ScenarioError(number, e.what());
        }
    }
    return log;
}

}  // namespace hcdht::dao

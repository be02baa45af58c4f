#pragma once

#include "hcdht/dao.hpp"

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace hcdht::dao {

/// A scenario line failed to parse or was rejected by the ledger.
class ScenarioError : public Error {
public:
    ScenarioError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Splits a scenario line into words. Double quotes group words; `#` starts a
/// comment outside quotes.
std::vector<std::string> tokenize(const std::string& line);

/// Applies a line-oriented scenario to `dao`, one operation per line:
///
///   mint <account> <amount>
///   transfer <from> <to> <amount>
///   lock <owner> <amount> <release-time>     prints the new lock id
///   release <lock-id>
///   tick <seconds>
///   propose <proposer> <debate-end> "<description>" [<recipient> <amount>]
///   suggest <proposal-id> <author> "<content>"
///   vote <proposal-id> <suggestion-id> <voter>
///   execute <proposal-id>                    prints the winning suggestion
///
/// Times are absolute, or relative to the current clock when written `+N`.
/// Returns one log line per applied operation. The first failure throws
/// ScenarioError carrying its line number; earlier operations stay applied.
std::vector<std::string> run_scenario(std::istream& in, Dao& dao);

}  // namespace hcdht::dao

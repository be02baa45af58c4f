#pragma once

#include "hcdht/errors.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hcdht::dao {

using Account = std::string;
using Amount = std::uint64_t;
using Timestamp = std::uint64_t;
using LockId = std::uint64_t;
using ProposalId = std::uint64_t;
using SuggestionId = std::uint64_t;

/// Account that funds value-transfer proposals. It is an ordinary account.
inline const Account kTreasury = "treasury";

enum class GovErrorCode {
    InvalidAmount,
    InvalidAccount,
    InsufficientFunds,
    Overflow,
    InvalidReleaseTime,
    UnknownLock,
    AlreadyReleased,
    LockNotExpired,
    NotAMember,
    InvalidDebateEnd,
    UnknownProposal,
    UnknownSuggestion,
    ClosedProposal,
    AlreadyVoted,
    NoVotingPower,
    DebateOngoing,
    AlreadyExecuted,
};

const char* to_string(GovErrorCode code);

/// Rejected governance operation. The state is left untouched.
class GovError : public Error {
public:
    GovError(GovErrorCode code, const std::string& detail);
    GovErrorCode code() const noexcept { return code_; }

private:
    GovErrorCode code_;
};

struct Lock {
    Account owner;
    Amount amount = 0;
    Timestamp release_time = 0;
    bool released = false;
};

struct TransferPayload {
    Account recipient;
    Amount amount = 0;
};

struct Suggestion {
    SuggestionId id = 0;
    Account author;
    std::string content;
    std::map<Account, Amount> votes;

    Amount total_weight() const;
};

struct Proposal {
    ProposalId id = 0;
    Account proposer;
    std::string description;
    Timestamp debate_end = 0;
    std::vector<Suggestion> suggestions;
    /// Accounts that already voted on any suggestion of this proposal.
    std::set<Account> voters;
    std::optional<TransferPayload> transfer;
    bool executed = false;
    std::optional<SuggestionId> winner;
};

struct GovState {
    std::map<Account, Amount> balances;
    std::map<LockId, Lock> locks;
    std::map<ProposalId, Proposal> proposals;
    Timestamp clock = 0;
    Amount total_supply = 0;
    LockId next_lock = 1;
    ProposalId next_proposal = 1;
};

nlohmann::json to_json(const GovState& state);

/// Deterministic governance ledger: token balances, time-locked stakes that
/// confer membership, proposals with suggestions, and stake-weighted votes.
///
/// Every operation either applies completely or throws GovError with the
/// state unchanged. Time only moves through tick().
class Dao {
public:
    Dao() = default;
    explicit Dao(GovState state) : state_(std::move(state)) {}

    const GovState& state() const noexcept { return state_; }
    Timestamp now() const noexcept { return state_.clock; }

    void tick(Timestamp seconds);
    /// Creates `amount` new tokens in `to`.
    void mint(const Account& to, Amount amount);
    void transfer(const Account& from, const Account& to, Amount amount);

    /// Moves `amount` from the owner's balance into a new lock that opens at
    /// `release_time` (strictly in the future).
    LockId lock_tokens(const Account& owner, Amount amount, Timestamp release_time);
    /// Returns the locked tokens once clock >= release_time.
    void release(LockId id);

    /// At least one unreleased lock whose release time has not passed.
    bool is_member(const Account& account) const;
    Amount balance(const Account& account) const;
    /// Sum of unreleased lock amounts held by `account`.
    Amount locked(const Account& account) const;
    /// Sum of the account's unreleased locks that open strictly after `debate_end`.
    Amount voting_weight(const Account& account, Timestamp debate_end) const;

    ProposalId submit_proposal(const Account& proposer, std::string description,
                               Timestamp debate_end,
                               std::optional<TransferPayload> transfer = std::nullopt);
    SuggestionId submit_suggestion(ProposalId proposal, const Account& author, std::string content);
    void vote(ProposalId proposal, SuggestionId suggestion, const Account& voter);
    /// Picks the suggestion with the largest total weight (lowest id on ties,
    /// none without votes) and enacts the transfer payload from the treasury
    /// when there is a winner.
    std::optional<SuggestionId> execute_proposal(ProposalId proposal);

    const Proposal& proposal(ProposalId id) const;

    /// balances + unreleased locks == total supply.
    bool conserved() const;

private:
    Proposal& open_proposal(ProposalId id);
    Amount& credit_slot(const Account& account, Amount amount);

    GovState state_;
};

}  // namespace hcdht::dao

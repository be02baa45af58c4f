#include "hcdht/dao.hpp"

#include <limits>

namespace hcdht::dao {

const char* to_string(GovErrorCode code) {
    switch (code) {
        case GovErrorCode::InvalidAmount: return "InvalidAmount";
        case GovErrorCode::InvalidAccount: return "InvalidAccount";
        case GovErrorCode::InsufficientFunds: return "InsufficientFunds";
        case GovErrorCode::Overflow: return "Overflow";
        case GovErrorCode::InvalidReleaseTime: return "InvalidReleaseTime";
        case GovErrorCode::UnknownLock: return "UnknownLock";
        case GovErrorCode::AlreadyReleased: return "AlreadyReleased";
        case GovErrorCode::LockNotExpired: return "LockNotExpired";
        case GovErrorCode::NotAMember: return "NotAMember";
        case GovErrorCode::InvalidDebateEnd: return "InvalidDebateEnd";
        case GovErrorCode::UnknownProposal: return "UnknownProposal";
        case GovErrorCode::UnknownSuggestion: return "UnknownSuggestion";
        case GovErrorCode::ClosedProposal: return "ClosedProposal";
        case GovErrorCode::AlreadyVoted: return "AlreadyVoted";
        case GovErrorCode::NoVotingPower: return "NoVotingPower";
        case GovErrorCode::DebateOngoing: return "DebateOngoing";
        case GovErrorCode::AlreadyExecuted: return "AlreadyExecuted";
    }
    return "?";
}

GovError::GovError(GovErrorCode code, const std::string& detail)
    : Error(std::string(to_string(code)) + ": " + detail), code_(code) {}

namespace {

constexpr Amount kMaxAmount = std::numeric_limits<Amount>::max();

void require_account(const Account& account) {
    if (account.empty()) throw GovError(GovErrorCode::InvalidAccount, "account name must be non-empty");
}

void require_positive(Amount amount) {
    if (amount == 0) throw GovError(GovErrorCode::InvalidAmount, "amount must be positive");
}

}  // namespace

Amount Suggestion::total_weight() const {
    Amount total = 0;
    for (const auto& [voter, weight] : votes) total += weight;
    return total;
}

void Dao::tick(Timestamp seconds) {
    if (seconds > std::numeric_limits<Timestamp>::max() - state_.clock) {
        throw GovError(GovErrorCode::Overflow, "clock overflow");
    }
    state_.clock += seconds;
}

Amount& Dao::credit_slot(const Account& account, Amount amount) {
    auto it = state_.balances.find(account);
    const Amount current = it == state_.balances.end() ? 0 : it->second;
    if (amount > kMaxAmount - current) throw GovError(GovErrorCode::Overflow, "balance of " + account);
    return state_.balances[account];
}

void Dao::mint(const Account& to, Amount amount) {
    require_account(to);
    require_positive(amount);
    if (amount > kMaxAmount - state_.total_supply) {
        throw GovError(GovErrorCode::Overflow, "total supply");
    }
    credit_slot(to, amount) += amount;
    state_.total_supply += amount;
}

Amount Dao::balance(const Account& account) const {
    auto it = state_.balances.find(account);
    return it == state_.balances.end() ? 0 : it->second;
}

void Dao::transfer(const Account& from, const Account& to, Amount amount) {
    require_account(from);
    require_account(to);
    require_positive(amount);
    if (balance(from) < amount) {
        throw GovError(GovErrorCode::InsufficientFunds,
                       from + " holds " + std::to_string(balance(from)) + ", needs " +
                           std::to_string(amount));
    }
    if (from == to) return;
    Amount& dest = credit_slot(to, amount);
    state_.balances[from] -= amount;
    dest += amount;
}

LockId Dao::lock_tokens(const Account& owner, Amount amount, Timestamp release_time) {
    require_account(owner);
    require_positive(amount);
    if (release_time <= state_.clock) {
        throw GovError(GovErrorCode::InvalidReleaseTime,
                       "release time " + std::to_string(release_time) + " is not after clock " +
                           std::to_string(state_.clock));
    }
    if (balance(owner) < amount) {
        throw GovError(GovErrorCode::InsufficientFunds,
                       owner + " holds " + std::to_string(balance(owner)) + ", needs " +
                           std::to_string(amount));
    }
    const LockId id = state_.next_lock++;
    state_.balances[owner] -= amount;
    state_.locks.emplace(id, Lock{owner, amount, release_time, false});
    return id;
}

void Dao::release(LockId id) {
    auto it = state_.locks.find(id);
    if (it == state_.locks.end()) throw GovError(GovErrorCode::UnknownLock, "lock " + std::to_string(id));
    Lock& lock = it->second;
    if (lock.released) throw GovError(GovErrorCode::AlreadyReleased, "lock " + std::to_string(id));
    if (state_.clock < lock.release_time) {
        throw GovError(GovErrorCode::LockNotExpired,
                       "lock " + std::to_string(id) + " opens at " + std::to_string(lock.release_time));
    }
    credit_slot(lock.owner, lock.amount) += lock.amount;
    lock.released = true;
}

bool Dao::is_member(const Account& account) const {
    for (const auto& [id, lock] : state_.locks) {
        if (lock.owner == account && !lock.released && lock.amount > 0 &&
            state_.clock < lock.release_time) {
            return true;
        }
    }
    return false;
}

Amount Dao::locked(const Account& account) const {
    Amount total = 0;
    for (const auto& [id, lock] : state_.locks) {
        if (lock.owner == account && !lock.released) total += lock.amount;
    }
    return total;
}

Amount Dao::voting_weight(const Account& account, Timestamp debate_end) const {
    Amount total = 0;
    for (const auto& [id, lock] : state_.locks) {
        if (lock.owner == account && !lock.released && lock.release_time > debate_end) {
            total += lock.amount;
        }
    }
    return total;
}

ProposalId Dao::submit_proposal(const Account& proposer, std::string description,
                                Timestamp debate_end, std::optional<TransferPayload> transfer) {
    if (!is_member(proposer)) throw GovError(GovErrorCode::NotAMember, proposer);
    if (debate_end <= state_.clock) {
        throw GovError(GovErrorCode::InvalidDebateEnd,
                       "debate end " + std::to_string(debate_end) + " is not after clock " +
                           std::to_string(state_.clock));
    }
    if (transfer) {
        require_account(transfer->recipient);
        require_positive(transfer->amount);
    }
    const ProposalId id = state_.next_proposal++;
    Proposal p;
    p.id = id;
    p.proposer = proposer;
    p.description = std::move(description);
    p.debate_end = debate_end;
    p.transfer = std::move(transfer);
    state_.proposals.emplace(id, std::move(p));
    return id;
}

const Proposal& Dao::proposal(ProposalId id) const {
    auto it = state_.proposals.find(id);
    if (it == state_.proposals.end()) {
        throw GovError(GovErrorCode::UnknownProposal, "proposal " + std::to_string(id));
    }
    return it->second;
}

Proposal& Dao::open_proposal(ProposalId id) {
    auto it = state_.proposals.find(id);
    if (it == state_.proposals.end()) {
        throw GovError(GovErrorCode::UnknownProposal, "proposal " + std::to_string(id));
    }
    if (state_.clock >= it->second.debate_end) {
        throw GovError(GovErrorCode::ClosedProposal,
                       "proposal " + std::to_string(id) + " closed at " +
                           std::to_string(it->second.debate_end));
    }
    return it->second;
}

SuggestionId Dao::submit_suggestion(ProposalId proposal, const Account& author, std::string content) {
    Proposal& p = open_proposal(proposal);
    if (!is_member(author)) throw GovError(GovErrorCode::NotAMember, author);
    const SuggestionId id = p.suggestions.size() + 1;
    p.suggestions.push_back(Suggestion{id, author, std::move(content), {}});
    return id;
}

void Dao::vote(ProposalId proposal, SuggestionId suggestion, const Account& voter) {
    Proposal& p = open_proposal(proposal);
    if (suggestion == 0 || suggestion > p.suggestions.size()) {
        throw GovError(GovErrorCode::UnknownSuggestion,
                       "suggestion " + std::to_string(suggestion) + " of proposal " +
                           std::to_string(proposal));
    }
    if (p.voters.contains(voter)) {
        throw GovError(GovErrorCode::AlreadyVoted, voter + " on proposal " + std::to_string(proposal));
    }
    if (!is_member(voter)) throw GovError(GovErrorCode::NotAMember, voter);
    const Amount weight = voting_weight(voter, p.debate_end);
    if (weight == 0) {
        throw GovError(GovErrorCode::NoVotingPower,
                       voter + " has no tokens locked past " + std::to_string(p.debate_end));
    }
    p.suggestions[suggestion - 1].votes.emplace(voter, weight);
    p.voters.insert(voter);
}

std::optional<SuggestionId> Dao::execute_proposal(ProposalId proposal) {
    auto it = state_.proposals.find(proposal);
    if (it == state_.proposals.end()) {
        throw GovError(GovErrorCode::UnknownProposal, "proposal " + std::to_string(proposal));
    }
    Proposal& p = it->second;
    if (p.executed) throw GovError(GovErrorCode::AlreadyExecuted, "proposal " + std::to_string(proposal));
    if (state_.clock < p.debate_end) {
        throw GovError(GovErrorCode::DebateOngoing,
                       "proposal " + std::to_string(proposal) + " closes at " +
                           std::to_string(p.debate_end));
    }

    std::optional<SuggestionId> winner;
    Amount best = 0;
    for (const auto& s : p.suggestions) {
        const Amount w = s.total_weight();
        if (w > best) {
            best = w;
            winner = s.id;
        }
    }

    if (winner && p.transfer) transfer(kTreasury, p.transfer->recipient, p.transfer->amount);
    p.executed = true;
    p.winner = winner;
    return winner;
}

bool Dao::conserved() const {
    // Accumulate in 128 bits so corrupted state cannot wrap around to equality.
    unsigned __int128 total = 0;
    for (const auto& [account, amount] : state_.balances) total += amount;
    for (const auto& [id, lock] : state_.locks) {
        if (!lock.released) total += lock.amount;
    }
    return total == state_.total_supply;
}

nlohmann::json to_json(const GovState& state) {
    using nlohmann::json;
    json balances = json::object();
    for (const auto& [account, amount] : state.balances) balances[account] = amount;

    json locks = json::array();
    for (const auto& [id, lock] : state.locks) {
        locks.push_back({{"id", id},
                         {"owner", lock.owner},
                         {"amount", lock.amount},
                         {"release_time", lock.release_time},
                         {"released", lock.released}});
    }

    json proposals = json::array();
    for (const auto& [id, p] : state.proposals) {
        json suggestions = json::array();
        for (const auto& s : p.suggestions) {
            json votes = json::object();
            for (const auto& [voter, weight] : s.votes) votes[voter] = weight;
            suggestions.push_back({{"id", s.id},
                                   {"author", s.author},
                                   {"content", s.content},
                                   {"votes", votes},
                                   {"total_weight", s.total_weight()}});
        }
        json entry{{"id", id},
                   {"proposer", p.proposer},
                   {"description", p.description},
                   {"debate_end", p.debate_end},
                   {"suggestions", suggestions},
                   {"executed", p.executed},
                   {"winner", p.winner ? json(*p.winner) : json(nullptr)}};
        if (p.transfer) {
            entry["transfer"] = {{"recipient", p.transfer->recipient}, {"amount", p.transfer->amount}};
        }
        proposals.push_back(std::move(entry));
    }

    return json{{"clock", state.clock},
                {"total_supply", state.total_supply},
                {"balances", balances},
                {"locks", locks},
                {"proposals", proposals}};
}

}  // namespace hcdht::dao

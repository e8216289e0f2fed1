#pragma once

// Move histories, runs and the challenge protocol: a player announces a
// q-move without anyone recomputing the realisations; if challenged, the
// player must exhibit, for each announced classical move, a run of the
// history after which that move is legal.

#include <set>

#include "json.hpp"
#include "qcg/quantum.hpp"

namespace qcg {

/// One classical choice per history entry.
struct Run
{
    std::vector<Move> choices;
};

struct Witness
{
    Move branch_move;
    Run run;
};

struct ChallengeVerdict
{
    bool upheld = false;
    std::vector<Witness> witnesses;

    nlohmann::json to_json() const
    {
        nlohmann::json ws = nlohmann::json::array();
        for (const auto& w : witnesses) {
            nlohmann::json run = nlohmann::json::array();
            for (const auto& m : w.run.choices)
                run.push_back(to_string(m));
            ws.push_back({{"branch_move", to_string(w.branch_move)}, {"run", run}});
        }
        return {{"upheld", upheld}, {"witnesses", ws}};
    }
};

/// An immutable record of announced q-moves from an initial position.
/// Appending checks turn order and legality and returns a new history.
class History
{
public:
    History(Game game, Position initial, Ruleset rules, Player first = Player::Left)
        : game_(std::move(game)), initial_(std::move(initial)), rules_(rules), first_(first),
          current_(initial_)
    {
        if (!game_.owns(initial_))
            throw UsageError("initial position does not belong to game " + game_.id());
    }

    const Game& game() const noexcept { return game_; }
    const Position& initial() const noexcept { return initial_; }
    const Ruleset& rules() const noexcept { return rules_; }
    Player first() const noexcept { return first_; }
    const std::vector<QMove>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    Player to_move() const noexcept { return entries_.size() % 2 == 0 ? first_ : opponent(first_); }

    /// Fold of apply_qmove over the entries.
    const QuantumPosition& current() const noexcept { return current_; }

    /// Throws UsageError out of turn, IllegalMove when illegal.
    History append(QMove q) const
    {
        if (q.owner() != to_move())
            throw UsageError("q-move owner " + std::string(to_string(q.owner())) + " but " +
                             std::string(to_string(to_move())) + " is to move");
        History next = *this;
        next.current_ = apply_qmove(game_, current_, q, rules_);
        next.entries_.push_back(std::move(q));
        return next;
    }

    /// History without its last entry.
    History without_last() const
    {
        History h(game_, initial_, rules_, first_);
        for (std::size_t i = 0; i + 1 < entries_.size(); ++i)
            h = h.append(entries_[i]);
        return h;
    }

private:
    Game game_;
    Position initial_;
    Ruleset rules_;
    Player first_;
    std::vector<QMove> entries_;
    QuantumPosition current_;
};

namespace detail {

// Depth-first search over choice sequences, pruning (depth, position) pairs
// already explored. `visit` sees each reachable end position once and may
// return true to stop.
template <typename Visit>
bool search_runs(const History& h, std::size_t depth, const Position& pos, std::vector<Move>& path,
                 std::set<std::pair<std::size_t, std::string>>& seen, Visit& visit)
{
    if (!seen.emplace(depth, encoding(pos)).second)
        return false;
    if (depth == h.size())
        return visit(pos, path);
    for (const auto& m : h.entries()[depth].moves()) {
        if (auto next = h.game().apply(pos, m)) {
            path.push_back(m);
            if (search_runs(h, depth + 1, *next, path, seen, visit))
                return true;
            path.pop_back();
        }
    }
    return false;
}

} // namespace detail

/// All valid runs, in lexicographic order of choices. Exponential in the
/// history length.
inline std::vector<Run> valid_runs(const History& h)
{
    std::vector<Run> out;
    std::vector<Move> path;
    auto rec = [&](auto&& self, std::size_t depth, const Position& pos) -> void {
        if (depth == h.size()) {
            out.push_back(Run{path});
            return;
        }
        for (const auto& m : h.entries()[depth].moves()) {
            if (auto next = h.game().apply(pos, m)) {
                path.push_back(m);
                self(self, depth + 1, *next);
                path.pop_back();
            }
        }
    };
    rec(rec, 0, h.initial());
    return out;
}

/// Realisation set: end positions over all valid runs.
inline QuantumPosition replay_history(const History& h)
{
    std::vector<Position> ends;
    std::vector<Move> path;
    std::set<std::pair<std::size_t, std::string>> seen;
    auto collect = [&ends](const Position& p, const std::vector<Move>&) {
        ends.push_back(p);
        return false;
    };
    detail::search_runs(h, 0, h.initial(), path, seen, collect);
    return QuantumPosition(std::move(ends));
}

/// Replays `run` from the initial position; nullopt when some choice is
/// illegal or not a member of its entry.
inline std::optional<Position> replay_run(const History& h, const Run& run)
{
    if (run.choices.size() != h.size())
        return std::nullopt;
    Position pos = h.initial();
    for (std::size_t i = 0; i < run.choices.size(); ++i) {
        const auto& members = h.entries()[i].moves();
        if (!std::binary_search(members.begin(), members.end(), run.choices[i]))
            return std::nullopt;
        auto next = h.game().apply(pos, run.choices[i]);
        if (!next)
            return std::nullopt;
        pos = std::move(*next);
    }
    return pos;
}

/// Checks a witness by direct classical replay.
inline bool verify_witness(const History& h, const Witness& w)
{
    auto end = replay_run(h, w.run);
    return end && h.game().apply(*end, w.branch_move).has_value();
}

/// Searches, for each member of `q`, a valid run after which it is legal.
/// Upheld iff every branch has a witness and, for an unsuperposed `q`, the
/// ruleset's condition on unsuperposed moves holds.
inline ChallengeVerdict exhibit_runs(const History& h, const QMove& q)
{
    ChallengeVerdict verdict;
    bool all_found = q.owner() == h.to_move() && static_cast<long long>(q.size()) <= h.rules().width();

    for (const auto& m : q.moves()) {
        std::optional<Run> found;
        std::vector<Move> path;
        std::set<std::pair<std::size_t, std::string>> seen;
        auto probe = [&](const Position& p, const std::vector<Move>& choices) {
            if (!h.game().apply(p, m))
                return false;
            found = Run{choices};
            return true;
        };
        detail::search_runs(h, 0, h.initial(), path, seen, probe);
        if (found)
            verdict.witnesses.push_back(Witness{m, std::move(*found)});
        else
            all_found = false;
    }

    if (all_found && q.unsuperposed()) {
        const QuantumPosition reals = replay_history(h);
        const auto per = detail::per_realisation_moves(h.game(), reals, q.owner());
        const auto available = detail::sorted_union(per);
        all_found = !detail::unsuperposed_check(h.rules().kind(), q.moves().front(), per, available);
    }
    verdict.upheld = all_found;
    return verdict;
}

/// The winner when the opponent challenges the announced `q`.
inline Player adjudicate_challenge(const History& h, const QMove& q)
{
    return exhibit_runs(h, q).upheld ? q.owner() : opponent(q.owner());
}

} // namespace qcg

#pragma once

// Quantum lift of a classical game. A quantum position is the set of
// classical realisations consistent with the moves played so far; a q-move
// is a set of classical moves announced together. Rulesets differ only in
// when a q-move with a single member (an unsuperposed move) is allowed.

#include <climits>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "qcg/notation.hpp"

namespace qcg {

// ---------------------------------------------------------------------------
// QuantumPosition

class QuantumPosition
{
public:
    /// Sorts and deduplicates. Throws UsageError when empty or mixing games.
    explicit QuantumPosition(std::vector<Position> realisations) : realisations_(std::move(realisations))
    {
        if (realisations_.empty())
            throw UsageError("a quantum position needs at least one realisation");
        std::sort(realisations_.begin(), realisations_.end());
        realisations_.erase(std::unique(realisations_.begin(), realisations_.end()), realisations_.end());
        const Game g = Game::of(realisations_.front());
        for (const auto& r : realisations_)
            if (!g.owns(r))
                throw UsageError("realisations of a quantum position must share one game");
    }

    explicit QuantumPosition(Position single) : realisations_{std::move(single)} {}

    const std::vector<Position>& realisations() const noexcept { return realisations_; }
    std::size_t size() const noexcept { return realisations_.size(); }
    bool superposed() const noexcept { return realisations_.size() > 1; }
    Game game() const { return Game::of(realisations_.front()); }

    bool contains(const Position& p) const
    {
        return std::binary_search(realisations_.begin(), realisations_.end(), p);
    }

    bool operator==(const QuantumPosition&) const = default;
    bool operator<(const QuantumPosition& o) const { return realisations_ < o.realisations_; }

    void append_encoding(std::string& out) const
    {
        detail::put_varint(out, realisations_.size());
        for (const auto& r : realisations_)
            qcg::append_encoding(out, r);
    }

private:
    std::vector<Position> realisations_;
};

// ---------------------------------------------------------------------------
// QMove

class QMove
{
public:
    /// Throws UsageError when empty or when `owner` may not play a member.
    QMove(std::vector<Move> moves, Player owner) : moves_(std::move(moves)), owner_(owner)
    {
        if (moves_.empty())
            throw UsageError("a q-move needs at least one classical move");
        std::sort(moves_.begin(), moves_.end());
        moves_.erase(std::unique(moves_.begin(), moves_.end()), moves_.end());
        for (const auto& m : moves_)
            if (!owners(m).contains(owner_))
                throw UsageError("move " + to_string(m) + " is not owned by " + std::string(to_string(owner_)));
    }

    const std::vector<Move>& moves() const noexcept { return moves_; }
    Player owner() const noexcept { return owner_; }
    std::size_t size() const noexcept { return moves_.size(); }
    bool unsuperposed() const noexcept { return moves_.size() == 1; }

    auto operator<=>(const QMove&) const = default;

private:
    std::vector<Move> moves_;
    Player owner_;
};

// ---------------------------------------------------------------------------
// Rulesets

enum class RulesetKind : std::uint8_t { A, B, C, CPrime, D };

inline std::string_view to_string(RulesetKind k) noexcept
{
    switch (k) {
    case RulesetKind::A: return "A";
    case RulesetKind::B: return "B";
    case RulesetKind::C: return "C";
    case RulesetKind::CPrime: return "Cp";
    case RulesetKind::D: return "D";
    }
    return "?";
}

class Ruleset
{
public:
    static constexpr int unbounded = INT_MAX;

    /// Throws UsageError for width < 1, or width < 2 under A and B.
    explicit Ruleset(RulesetKind kind, int width = unbounded) : kind_(kind), width_(width)
    {
        if (width < 1)
            throw UsageError("superposition width must be positive");
        if (width < 2 && (kind == RulesetKind::A || kind == RulesetKind::B))
            throw UsageError("rulesets A and B need width >= 2");
    }

    /// Plain classical play: every move unsuperposed.
    static Ruleset classical() { return Ruleset(RulesetKind::D, 1); }

    RulesetKind kind() const noexcept { return kind_; }
    int width() const noexcept { return width_; }
    bool bounded() const noexcept { return width_ != unbounded; }
    bool is_classical() const noexcept { return kind_ == RulesetKind::D && width_ == 1; }

    /// Whether the covered-realisation reduction preserves values.
    bool allows_reduction() const noexcept
    {
        return kind_ == RulesetKind::A || kind_ == RulesetKind::B || kind_ == RulesetKind::D;
    }

    std::string name() const
    {
        if (is_classical())
            return "classical";
        return std::string(to_string(kind_));
    }

    std::string width_text() const { return bounded() ? std::to_string(width_) : "max"; }

    bool operator==(const Ruleset&) const = default;

private:
    RulesetKind kind_;
    int width_;
};

inline RulesetKind parse_ruleset_kind(std::string_view text)
{
    const auto t = detail::trim(text);
    if (t == "A")
        return RulesetKind::A;
    if (t == "B")
        return RulesetKind::B;
    if (t == "C")
        return RulesetKind::C;
    if (t == "Cp" || t == "C'" || t == "CPRIME")
        return RulesetKind::CPrime;
    if (t == "D")
        return RulesetKind::D;
    throw ParseError("unknown ruleset", std::string(t));
}

/// "max" or a positive integer.
inline int parse_width(std::string_view text)
{
    const auto t = detail::trim(text);
    if (t == "max")
        return Ruleset::unbounded;
    const int w = detail::parse_int(t, "width");
    if (w < 1)
        throw ParseError("width must be positive", std::string(t));
    return w;
}

/// Ruleset flag value plus width; "classical" ignores the width.
inline Ruleset parse_ruleset(std::string_view kind, std::string_view width = "max")
{
    if (detail::trim(kind) == "classical")
        return Ruleset::classical();
    return Ruleset(parse_ruleset_kind(kind), parse_width(width));
}

// ---------------------------------------------------------------------------
// Rejections

enum class Reason : std::uint8_t { WidthExceeded, UnsuperposedForbidden, NoSupport, NotUniversal };

inline std::string_view to_string(Reason r) noexcept
{
    switch (r) {
    case Reason::WidthExceeded: return "WIDTH_EXCEEDED";
    case Reason::UnsuperposedForbidden: return "UNSUPERPOSED_FORBIDDEN";
    case Reason::NoSupport: return "NO_SUPPORT";
    case Reason::NotUniversal: return "NOT_UNIVERSAL";
    }
    return "?";
}

struct Rejection
{
    Reason reason;
    std::optional<Move> offending_branch;
};

class IllegalMove : public std::runtime_error
{
public:
    explicit IllegalMove(Rejection r)
        : std::runtime_error(std::string("illegal q-move: ") + std::string(to_string(r.reason)) +
                             (r.offending_branch ? " at " + to_string(*r.offending_branch) : "")),
          rejection_(std::move(r))
    {}

    const Rejection& rejection() const noexcept { return rejection_; }

private:
    Rejection rejection_;
};

// ---------------------------------------------------------------------------
// Legality and transitions

namespace detail {

inline std::vector<Move> sorted_union(std::vector<std::vector<Move>> lists)
{
    std::vector<Move> out;
    for (auto& l : lists)
        out.insert(out.end(), std::make_move_iterator(l.begin()), std::make_move_iterator(l.end()));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline bool contains(const std::vector<Move>& sorted, const Move& m)
{
    return std::binary_search(sorted.begin(), sorted.end(), m);
}

// Rule for a q-move with the single member `m`, given each realisation's
// legal moves for the mover and their union.
inline std::optional<Reason> unsuperposed_check(RulesetKind kind, const Move& m,
                                                const std::vector<std::vector<Move>>& per_realisation,
                                                const std::vector<Move>& available)
{
    if (!contains(available, m))
        return kind == RulesetKind::A ? Reason::UnsuperposedForbidden : Reason::NoSupport;
    switch (kind) {
    case RulesetKind::A: return Reason::UnsuperposedForbidden;
    case RulesetKind::B:
        if (available.size() != 1)
            return Reason::UnsuperposedForbidden;
        return std::nullopt;
    case RulesetKind::C:
        for (const auto& moves : per_realisation)
            if (!contains(moves, m))
                return Reason::NotUniversal;
        return std::nullopt;
    case RulesetKind::CPrime:
        for (const auto& moves : per_realisation)
            if (!moves.empty() && !contains(moves, m))
                return Reason::NotUniversal;
        return std::nullopt;
    case RulesetKind::D: return std::nullopt;
    }
    return std::nullopt;
}

inline std::vector<std::vector<Move>> per_realisation_moves(const Game& game, const QuantumPosition& s, Player who)
{
    std::vector<std::vector<Move>> out;
    out.reserve(s.size());
    for (const auto& r : s.realisations())
        out.push_back(game.legal_moves(r, who));
    return out;
}

} // namespace detail

/// Classical moves legal for `who` in at least one realisation, sorted.
inline std::vector<Move> available_classical_moves(const Game& game, const QuantumPosition& s, Player who)
{
    return detail::sorted_union(detail::per_realisation_moves(game, s, who));
}

inline std::vector<Move> available_classical_moves(const QuantumPosition& s, Player who)
{
    return available_classical_moves(s.game(), s, who);
}

/// Why `q` is illegal in `s` under `rules`, or nullopt when it is legal.
inline std::optional<Rejection> check_qmove(const Game& game, const QuantumPosition& s, const QMove& q,
                                            const Ruleset& rules)
{
    for (const auto& r : s.realisations())
        if (!game.owns(r))
            throw UsageError("position does not belong to game " + game.id());
    for (const auto& m : q.moves())
        (void)game.apply(s.realisations().front(), m);  // throws on a foreign label

    if (static_cast<long long>(q.size()) > rules.width())
        return Rejection{Reason::WidthExceeded, std::nullopt};

    const auto per = detail::per_realisation_moves(game, s, q.owner());
    const auto available = detail::sorted_union(per);
    if (q.unsuperposed()) {
        if (auto reason = detail::unsuperposed_check(rules.kind(), q.moves().front(), per, available))
            return Rejection{*reason, q.moves().front()};
        return std::nullopt;
    }
    for (const auto& m : q.moves())
        if (!detail::contains(available, m))
            return Rejection{Reason::NoSupport, m};
    return std::nullopt;
}

inline bool is_legal_qmove(const Game& game, const QuantumPosition& s, const QMove& q, const Ruleset& rules)
{
    return !check_qmove(game, s, q, rules).has_value();
}

inline bool is_legal_qmove(const QuantumPosition& s, const QMove& q, const Ruleset& rules)
{
    return is_legal_qmove(s.game(), s, q, rules);
}

/// Every classical successor of every realisation under every member of `q`,
/// deduplicated. nullopt when no member applies anywhere.
inline std::optional<QuantumPosition> transition(const Game& game, const QuantumPosition& s, const QMove& q)
{
    std::vector<Position> next;
    for (const auto& r : s.realisations())
        for (const auto& m : q.moves())
            if (auto p = game.apply(r, m))
                next.push_back(std::move(*p));
    if (next.empty())
        return std::nullopt;
    return QuantumPosition(std::move(next));
}

/// Checked transition. Throws IllegalMove with the rejection reason.
inline QuantumPosition apply_qmove(const Game& game, const QuantumPosition& s, const QMove& q, const Ruleset& rules)
{
    if (auto rejection = check_qmove(game, s, q, rules))
        throw IllegalMove(std::move(*rejection));
    return *transition(game, s, q);
}

inline QuantumPosition apply_qmove(const QuantumPosition& s, const QMove& q, const Ruleset& rules)
{
    return apply_qmove(s.game(), s, q, rules);
}

/// All legal q-moves for `who`: legal singletons first, then subsets of the
/// available moves by increasing size, each size in lexicographic order.
/// Cost grows as 2^|available| for unbounded width.
inline std::vector<QMove> enumerate_qmoves(const Game& game, const QuantumPosition& s, Player who,
                                           const Ruleset& rules)
{
    const auto per = detail::per_realisation_moves(game, s, who);
    const auto available = detail::sorted_union(per);
    std::vector<QMove> out;
    for (const auto& m : available)
        if (!detail::unsuperposed_check(rules.kind(), m, per, available))
            out.emplace_back(std::vector<Move>{m}, who);

    const std::size_t n = available.size();
    const std::size_t max_size = std::min<std::size_t>(n, static_cast<std::size_t>(rules.width()));
    std::vector<std::size_t> idx;
    for (std::size_t k = 2; k <= max_size; ++k) {
        idx.resize(k);
        for (std::size_t i = 0; i < k; ++i)
            idx[i] = i;
        for (;;) {
            std::vector<Move> members;
            members.reserve(k);
            for (auto i : idx)
                members.push_back(available[i]);
            out.emplace_back(std::move(members), who);

            std::size_t i = k;
            while (i > 0 && idx[i - 1] == n - k + (i - 1))
                --i;
            if (i == 0)
                break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

inline std::vector<QMove> enumerate_qmoves(const QuantumPosition& s, Player who, const Ruleset& rules)
{
    return enumerate_qmoves(s.game(), s, who, rules);
}

// ---------------------------------------------------------------------------
// Covered realisations

/// Memo for is_covered, keyed by (position, set of other positions).
/// Thread-safe; concurrent inserts of the same key store the same value.
class CoveredMemo
{
public:
    std::optional<bool> find(const std::string& key) const
    {
        std::shared_lock lock(mutex_);
        auto it = map_.find(key);
        if (it == map_.end())
            return std::nullopt;
        return it->second;
    }

    void insert(std::string key, bool value)
    {
        std::unique_lock lock(mutex_);
        map_.emplace(std::move(key), value);
    }

    std::size_t size() const
    {
        std::shared_lock lock(mutex_);
        return map_.size();
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, bool> map_;
};

namespace detail {

inline bool covered_impl(const Game& game, const Position& g1, const std::vector<Position>& rest, CoveredMemo& memo)
{
    const auto moves = game.any_legal_moves(g1);
    if (moves.empty())
        return true;
    if (rest.empty())
        return false;

    std::string key;
    append_encoding(key, g1);
    put_varint(key, rest.size());
    for (const auto& r : rest)
        append_encoding(key, r);
    if (auto hit = memo.find(key))
        return *hit;

    bool covered = true;
    for (const auto& m : moves) {
        std::vector<Position> next_rest;
        for (const auto& h : rest)
            if (auto p = game.apply(h, m))
                next_rest.push_back(std::move(*p));
        if (next_rest.empty()) {
            covered = false;
            break;
        }
        std::sort(next_rest.begin(), next_rest.end());
        next_rest.erase(std::unique(next_rest.begin(), next_rest.end()), next_rest.end());
        if (!covered_impl(game, *game.apply(g1, m), next_rest, memo)) {
            covered = false;
            break;
        }
    }
    memo.insert(std::move(key), covered);
    return covered;
}

} // namespace detail

/// True when `g1` has no legal move, or every legal move on `g1` is also
/// legal somewhere in `rest` and the successor of `g1` is covered by the
/// successors in `rest`.
inline bool is_covered(const Game& game, const Position& g1, std::vector<Position> rest, CoveredMemo& memo)
{
    if (!game.owns(g1))
        throw UsageError("position does not belong to game " + game.id());
    std::sort(rest.begin(), rest.end());
    rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
    for (const auto& r : rest)
        if (!game.owns(r))
            throw UsageError("position does not belong to game " + game.id());
    return detail::covered_impl(game, g1, rest, memo);
}

/// Drops realisations covered by the others, scanning in ascending order and
/// restarting after each removal. Identity under C and C', where the
/// reduction does not preserve values.
inline QuantumPosition canonicalize(const Game& game, const QuantumPosition& s, const Ruleset& rules,
                                    CoveredMemo& memo)
{
    if (!rules.allows_reduction() || !s.superposed())
        return s;
    std::vector<Position> reals = s.realisations();
    bool changed = true;
    while (changed && reals.size() > 1) {
        changed = false;
        for (std::size_t i = 0; i < reals.size(); ++i) {
            std::vector<Position> rest;
            rest.reserve(reals.size() - 1);
            for (std::size_t j = 0; j < reals.size(); ++j)
                if (j != i)
                    rest.push_back(reals[j]);
            if (detail::covered_impl(game, reals[i], rest, memo)) {
                reals.erase(reals.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return QuantumPosition(std::move(reals));
}

// ---------------------------------------------------------------------------
// Text forms

/// "{nim:0,1,2 | nim:1,0,2}"
inline std::string to_string(const QuantumPosition& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i)
            out += " | ";
        out += to_string(s.realisations()[i]);
    }
    return out + "}";
}

/// "[1:-1 & 2:-1]"
inline std::string to_string(const QMove& q)
{
    std::string out = "[";
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i)
            out += " & ";
        out += to_string(q.moves()[i]);
    }
    return out + "]";
}

/// Parses "{...}" or a bare classical position. A '|' separates
/// realisations only when followed by "<game>:" (Hackenbush stalk
/// separators never are).
inline QuantumPosition parse_quantum_position(std::string_view text)
{
    auto t = detail::trim(text);
    if (t.empty() || t.front() != '{')
        return QuantumPosition(parse_position(t));
    if (t.back() != '}')
        throw ParseError("expected closing '}'", std::string(t));
    t = t.substr(1, t.size() - 2);

    auto starts_realisation = [](std::string_view rest) {
        rest = detail::trim(rest);
        std::size_t i = 0;
        while (i < rest.size() && std::isalnum(static_cast<unsigned char>(rest[i])))
            ++i;
        return i > 0 && i < rest.size() && rest[i] == ':';
    };

    std::vector<Position> reals;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= t.size(); ++i) {
        if (i < t.size()) {
            if (t[i] == '(')
                ++depth;
            else if (t[i] == ')')
                --depth;
            if (t[i] != '|' || depth != 0 || !starts_realisation(t.substr(i + 1)))
                continue;
        }
        reals.push_back(parse_position(t.substr(start, i - start)));
        start = i + 1;
    }
    return QuantumPosition(std::move(reals));
}

/// Parses "[m1 & m2 ...]" (brackets optional) for `owner`.
inline QMove parse_qmove(std::string_view text, const Game& game, Player owner)
{
    auto t = detail::trim(text);
    if (!t.empty() && t.front() == '[') {
        if (t.back() != ']')
            throw ParseError("expected closing ']'", std::string(t));
        t = t.substr(1, t.size() - 2);
    }
    std::vector<Move> moves;
    for (auto tok : detail::split(t, '&')) {
        if (detail::trim(tok).empty())
            throw ParseError("empty classical move in q-move", std::string(text));
        moves.push_back(parse_move(tok, game, owner));
    }
    try {
        return QMove(std::move(moves), owner);
    } catch (const UsageError& e) {
        throw ParseError(e.what(), std::string(text));
    }
}

} // namespace qcg

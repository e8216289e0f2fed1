#pragma once

// Classical combinatorial games as labeled-move rulesets: a game maps a
// (position, move label) pair to a successor position, or to nothing when
// the move is illegal there. Labels keep their meaning across positions,
// which is what the quantum lift in quantum.hpp relies on.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qcg {

class UsageError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

enum class Player : std::uint8_t { Left, Right };

constexpr Player opponent(Player p) noexcept
{
    return p == Player::Left ? Player::Right : Player::Left;
}

inline std::string_view to_string(Player p) noexcept
{
    return p == Player::Left ? "LEFT" : "RIGHT";
}

// Set of players allowed to play a move.
struct Owners
{
    bool left = false;
    bool right = false;

    constexpr bool contains(Player p) const noexcept { return p == Player::Left ? left : right; }
    static constexpr Owners both() noexcept { return {true, true}; }
    static constexpr Owners only(Player p) noexcept
    {
        return p == Player::Left ? Owners{true, false} : Owners{false, true};
    }
};

// ---------------------------------------------------------------------------
// Move labels

/// Remove `amount` tokens from heap number `heap` (1-based).
struct NimMove
{
    int heap = 1;
    int amount = 1;
    auto operator<=>(const NimMove&) const = default;
};

/// Remove pin number `pin` (1-based) from an octal 0.6 line.
struct PinMove
{
    int pin = 1;
    auto operator<=>(const PinMove&) const = default;
};

struct Cell
{
    int x = 0;
    int y = 0;
    auto operator<=>(const Cell&) const = default;
};

/// A domino on two adjacent cells, `first < second`. Vertical dominoes
/// (same x) belong to Left, horizontal ones to Right.
struct DominoMove
{
    Cell first;
    Cell second;
    auto operator<=>(const DominoMove&) const = default;

    bool vertical() const noexcept { return first.x == second.x; }
};

/// Cut the edge named `label`. The owner is the player whose colour the
/// edge must have for the cut to be legal.
struct EdgeMove
{
    std::string label;
    Player owner = Player::Left;
    auto operator<=>(const EdgeMove&) const = default;
};

enum class Operand : std::uint8_t { Left, Right };

/// A move label. `path` routes the move through nested sums, outermost
/// operand first; it is empty for moves of a basic game.
struct Move
{
    std::vector<Operand> path;
    std::variant<NimMove, PinMove, DominoMove, EdgeMove> body;

    auto operator<=>(const Move&) const = default;
};

inline Owners owners(const Move& m)
{
    if (const auto* d = std::get_if<DominoMove>(&m.body))
        return Owners::only(d->vertical() ? Player::Left : Player::Right);
    if (const auto* e = std::get_if<EdgeMove>(&m.body))
        return Owners::only(e->owner);
    return Owners::both();
}

// ---------------------------------------------------------------------------
// Positions

/// Heap sizes by position. Heap order is significant: labels address heaps by index.
struct NimPosition
{
    std::vector<int> heaps;
    auto operator<=>(const NimPosition&) const = default;
};

/// Standing pins of an octal 0.6 line (1 = standing).
struct PinLine
{
    std::vector<std::uint8_t> pins;
    auto operator<=>(const PinLine&) const = default;
};

/// Free cells of a Domineering board, kept sorted.
struct DomineeringPosition
{
    std::vector<Cell> free;
    auto operator<=>(const DomineeringPosition&) const = default;
};

enum class Color : std::uint8_t { Blue, Red };

struct Edge
{
    Color color = Color::Blue;
    std::string label;
    auto operator<=>(const Edge&) const = default;
};

/// Vertical Hackenbush stalks, each listed bottom to top. Empty stalks are dropped.
struct HackenbushPosition
{
    std::vector<std::vector<Edge>> stalks;
    auto operator<=>(const HackenbushPosition&) const = default;
};

struct Position;

/// Pair of operand positions of a disjunctive sum.
struct SumPosition
{
    std::vector<Position> parts;  // exactly two

    friend bool operator==(const SumPosition& a, const SumPosition& b);
    friend std::strong_ordering operator<=>(const SumPosition& a, const SumPosition& b);
};

struct Position
{
    std::variant<NimPosition, PinLine, DomineeringPosition, HackenbushPosition, SumPosition> value;

    auto operator<=>(const Position&) const = default;
};

inline bool operator==(const SumPosition& a, const SumPosition& b)
{
    return a.parts == b.parts;
}

inline std::strong_ordering operator<=>(const SumPosition& a, const SumPosition& b)
{
    return std::lexicographical_compare_three_way(a.parts.begin(), a.parts.end(), b.parts.begin(),
                                                  b.parts.end());
}

inline Position nim_position(std::vector<int> heaps)
{
    return Position{NimPosition{std::move(heaps)}};
}

inline Position sum_position(Position left, Position right)
{
    SumPosition s;
    s.parts.push_back(std::move(left));
    s.parts.push_back(std::move(right));
    return Position{std::move(s)};
}

inline Move nim_move(int heap, int amount)
{
    return Move{{}, NimMove{heap, amount}};
}

inline Move with_operand(Operand op, Move m)
{
    m.path.insert(m.path.begin(), op);
    return m;
}

// ---------------------------------------------------------------------------
// Binary canonical encoding (self-delimiting). Two positions are equal iff
// their encodings are byte-equal; used for memo keys.

namespace detail {

inline void put_varint(std::string& out, std::uint64_t v)
{
    while (v >= 0x80) {
        out.push_back(static_cast<char>((v & 0x7f) | 0x80));
        v >>= 7;
    }
    out.push_back(static_cast<char>(v));
}

inline void put_bytes(std::string& out, std::string_view s)
{
    put_varint(out, s.size());
    out.append(s);
}

} // namespace detail

inline void append_encoding(std::string& out, const Position& p)
{
    out.push_back(static_cast<char>(p.value.index()));
    std::visit(
        [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, NimPosition>) {
                detail::put_varint(out, v.heaps.size());
                for (int h : v.heaps)
                    detail::put_varint(out, static_cast<std::uint64_t>(h));
            } else if constexpr (std::is_same_v<T, PinLine>) {
                detail::put_varint(out, v.pins.size());
                for (auto b : v.pins)
                    out.push_back(static_cast<char>(b));
            } else if constexpr (std::is_same_v<T, DomineeringPosition>) {
                detail::put_varint(out, v.free.size());
                for (const Cell& c : v.free) {
                    detail::put_varint(out, static_cast<std::uint64_t>(c.x));
                    detail::put_varint(out, static_cast<std::uint64_t>(c.y));
                }
            } else if constexpr (std::is_same_v<T, HackenbushPosition>) {
                detail::put_varint(out, v.stalks.size());
                for (const auto& stalk : v.stalks) {
                    detail::put_varint(out, stalk.size());
                    for (const Edge& e : stalk) {
                        out.push_back(static_cast<char>(e.color));
                        detail::put_bytes(out, e.label);
                    }
                }
            } else {
                for (const Position& part : v.parts)
                    append_encoding(out, part);
            }
        },
        p.value);
}

inline std::string encoding(const Position& p)
{
    std::string out;
    append_encoding(out, p);
    return out;
}

// ---------------------------------------------------------------------------
// Games

enum class GameKind : std::uint8_t { Nim, Octal06, Domineering, Hackenbush, Sum };

/// A classical ruleset. Basic games carry no parameters (the position holds
/// the board); a sum game holds its two operand games.
class Game
{
public:
    static Game nim() { return Game(GameKind::Nim); }
    static Game octal06() { return Game(GameKind::Octal06); }
    static Game domineering() { return Game(GameKind::Domineering); }
    static Game hackenbush() { return Game(GameKind::Hackenbush); }

    /// Disjunctive sum. Operand alphabets are made disjoint by tagging labels
    /// with the operand they act on.
    friend Game make_sum(Game left, Game right)
    {
        Game g(GameKind::Sum);
        g.operands_.push_back(std::move(left));
        g.operands_.push_back(std::move(right));
        return g;
    }

    /// The game a position belongs to.
    static Game of(const Position& p)
    {
        switch (p.value.index()) {
        case 0: return nim();
        case 1: return octal06();
        case 2: return domineering();
        case 3: return hackenbush();
        default: {
            const auto& s = std::get<SumPosition>(p.value);
            return make_sum(of(s.parts.at(0)), of(s.parts.at(1)));
        }
        }
    }

    GameKind kind() const noexcept { return kind_; }
    const std::vector<Game>& operands() const noexcept { return operands_; }

    bool operator==(const Game&) const = default;

    std::string id() const
    {
        switch (kind_) {
        case GameKind::Nim: return "nim";
        case GameKind::Octal06: return "octal06";
        case GameKind::Domineering: return "domineering";
        case GameKind::Hackenbush: return "hackenbush";
        case GameKind::Sum: return "sum(" + operands_[0].id() + "," + operands_[1].id() + ")";
        }
        return {};
    }

    /// True when every move is available to both players.
    bool impartial() const
    {
        switch (kind_) {
        case GameKind::Nim:
        case GameKind::Octal06: return true;
        case GameKind::Sum: return operands_[0].impartial() && operands_[1].impartial();
        default: return false;
        }
    }

    /// True when `p` is a position of this game.
    bool owns(const Position& p) const
    {
        if (kind_ == GameKind::Sum) {
            const auto* s = std::get_if<SumPosition>(&p.value);
            return s && s->parts.size() == 2 && operands_[0].owns(s->parts[0]) &&
                   operands_[1].owns(s->parts[1]);
        }
        return p.value.index() == static_cast<std::size_t>(kind_);
    }

    /// Successor of `p` under `m`, or nullopt when the move is illegal.
    /// Throws UsageError when `p` or `m` belong to a different game.
    std::optional<Position> apply(const Position& p, const Move& m) const
    {
        require_position(p);
        return apply_at(p, m, 0);
    }

    /// Legal labels for `who`, sorted.
    std::vector<Move> legal_moves(const Position& p, Player who) const
    {
        require_position(p);
        std::vector<Move> out;
        collect(p, who, out);
        return out;
    }

    /// Legal labels for either player, sorted and deduplicated.
    std::vector<Move> any_legal_moves(const Position& p) const
    {
        auto out = legal_moves(p, Player::Left);
        if (!impartial()) {
            auto right = legal_moves(p, Player::Right);
            std::vector<Move> merged;
            merged.reserve(out.size() + right.size());
            std::set_union(out.begin(), out.end(), right.begin(), right.end(),
                           std::back_inserter(merged));
            out = std::move(merged);
        }
        return out;
    }

    bool has_moves(const Position& p, Player who) const { return !legal_moves(p, who).empty(); }

    /// Nonnegative size that every move strictly decreases; bounds the birthday.
    int measure(const Position& p) const
    {
        require_position(p);
        return measure_of(p);
    }

private:
    explicit Game(GameKind k) : kind_(k) {}

    void require_position(const Position& p) const
    {
        if (!owns(p))
            throw UsageError("position does not belong to game " + id());
    }

    [[noreturn]] void wrong_move() const
    {
        throw UsageError("move label does not belong to game " + id());
    }

    static int measure_of(const Position& p)
    {
        return std::visit(
            [](const auto& v) -> int {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, NimPosition>) {
                    int total = 0;
                    for (int h : v.heaps)
                        total += h;
                    return total;
                } else if constexpr (std::is_same_v<T, PinLine>) {
                    return static_cast<int>(std::count(v.pins.begin(), v.pins.end(), 1));
                } else if constexpr (std::is_same_v<T, DomineeringPosition>) {
                    return static_cast<int>(v.free.size());
                } else if constexpr (std::is_same_v<T, HackenbushPosition>) {
                    int total = 0;
                    for (const auto& s : v.stalks)
                        total += static_cast<int>(s.size());
                    return total;
                } else {
                    return measure_of(v.parts[0]) + measure_of(v.parts[1]);
                }
            },
            p.value);
    }

    std::optional<Position> apply_at(const Position& p, const Move& m, std::size_t depth) const
    {
        if (kind_ == GameKind::Sum) {
            if (depth >= m.path.size())
                wrong_move();
            const auto side = static_cast<std::size_t>(m.path[depth]);
            const auto& sum = std::get<SumPosition>(p.value);
            auto next = operands_[side].apply_at(sum.parts[side], m, depth + 1);
            if (!next)
                return std::nullopt;
            SumPosition out = sum;
            out.parts[side] = std::move(*next);
            return Position{std::move(out)};
        }
        if (depth != m.path.size())
            wrong_move();

        switch (kind_) {
        case GameKind::Nim: {
            const auto* mv = std::get_if<NimMove>(&m.body);
            if (!mv)
                wrong_move();
            const auto& heaps = std::get<NimPosition>(p.value).heaps;
            if (mv->heap < 1 || mv->heap > static_cast<int>(heaps.size()) || mv->amount < 1 ||
                heaps[mv->heap - 1] < mv->amount)
                return std::nullopt;
            NimPosition out{heaps};
            out.heaps[mv->heap - 1] -= mv->amount;
            return Position{std::move(out)};
        }
        case GameKind::Octal06: {
            const auto* mv = std::get_if<PinMove>(&m.body);
            if (!mv)
                wrong_move();
            const auto& pins = std::get<PinLine>(p.value).pins;
            if (!pin_removable(pins, mv->pin))
                return std::nullopt;
            PinLine out{pins};
            out.pins[mv->pin - 1] = 0;
            return Position{std::move(out)};
        }
        case GameKind::Domineering: {
            const auto* mv = std::get_if<DominoMove>(&m.body);
            if (!mv)
                wrong_move();
            const auto& free = std::get<DomineeringPosition>(p.value).free;
            if (!domino_shape(*mv) || !std::binary_search(free.begin(), free.end(), mv->first) ||
                !std::binary_search(free.begin(), free.end(), mv->second))
                return std::nullopt;
            DomineeringPosition out;
            out.free.reserve(free.size() - 2);
            for (const Cell& c : free)
                if (c != mv->first && c != mv->second)
                    out.free.push_back(c);
            return Position{std::move(out)};
        }
        case GameKind::Hackenbush: {
            const auto* mv = std::get_if<EdgeMove>(&m.body);
            if (!mv)
                wrong_move();
            const auto& stalks = std::get<HackenbushPosition>(p.value).stalks;
            const Color wanted = mv->owner == Player::Left ? Color::Blue : Color::Red;
            for (std::size_t s = 0; s < stalks.size(); ++s) {
                for (std::size_t e = 0; e < stalks[s].size(); ++e) {
                    if (stalks[s][e].label != mv->label)
                        continue;
                    if (stalks[s][e].color != wanted)
                        return std::nullopt;
                    HackenbushPosition out{stalks};
                    out.stalks[s].resize(e);
                    if (out.stalks[s].empty())
                        out.stalks.erase(out.stalks.begin() + static_cast<std::ptrdiff_t>(s));
                    return Position{std::move(out)};
                }
            }
            return std::nullopt;
        }
        case GameKind::Sum: break;
        }
        return std::nullopt;
    }

    void collect(const Position& p, Player who, std::vector<Move>& out) const
    {
        switch (kind_) {
        case GameKind::Nim: {
            const auto& heaps = std::get<NimPosition>(p.value).heaps;
            for (std::size_t i = 0; i < heaps.size(); ++i)
                for (int j = 1; j <= heaps[i]; ++j)
                    out.push_back(nim_move(static_cast<int>(i) + 1, j));
            break;
        }
        case GameKind::Octal06: {
            const auto& pins = std::get<PinLine>(p.value).pins;
            for (int i = 1; i <= static_cast<int>(pins.size()); ++i)
                if (pin_removable(pins, i))
                    out.push_back(Move{{}, PinMove{i}});
            break;
        }
        case GameKind::Domineering: {
            const auto& free = std::get<DomineeringPosition>(p.value).free;
            const Cell step = who == Player::Left ? Cell{0, 1} : Cell{1, 0};
            for (const Cell& c : free) {
                const Cell next{c.x + step.x, c.y + step.y};
                if (std::binary_search(free.begin(), free.end(), next))
                    out.push_back(Move{{}, DominoMove{c, next}});
            }
            std::sort(out.begin(), out.end());
            break;
        }
        case GameKind::Hackenbush: {
            const auto& stalks = std::get<HackenbushPosition>(p.value).stalks;
            const Color wanted = who == Player::Left ? Color::Blue : Color::Red;
            for (const auto& stalk : stalks)
                for (const Edge& e : stalk)
                    if (e.color == wanted)
                        out.push_back(Move{{}, EdgeMove{e.label, who}});
            std::sort(out.begin(), out.end());
            break;
        }
        case GameKind::Sum: {
            const auto& sum = std::get<SumPosition>(p.value);
            for (std::size_t side = 0; side < 2; ++side) {
                std::vector<Move> inner;
                operands_[side].collect(sum.parts[side], who, inner);
                for (auto& m : inner)
                    out.push_back(with_operand(static_cast<Operand>(side), std::move(m)));
            }
            break;
        }
        }
    }

    // Pin i may go iff it stands and a neighbour stands.
    static bool pin_removable(const std::vector<std::uint8_t>& pins, int i)
    {
        const int n = static_cast<int>(pins.size());
        if (i < 1 || i > n || !pins[i - 1])
            return false;
        return (i > 1 && pins[i - 2]) || (i < n && pins[i]);
    }

    static bool domino_shape(const DominoMove& d)
    {
        const int dx = d.second.x - d.first.x;
        const int dy = d.second.y - d.first.y;
        return (dx == 0 && dy == 1) || (dx == 1 && dy == 0);
    }

    GameKind kind_;
    std::vector<Game> operands_;
};

/// apply_move with the game passed explicitly.
inline std::optional<Position> apply_move(const Game& g, const Position& p, const Move& m)
{
    return g.apply(p, m);
}

inline std::vector<Move> legal_classical_moves(const Game& g, const Position& p, Player who)
{
    return g.legal_moves(p, who);
}

} // namespace qcg

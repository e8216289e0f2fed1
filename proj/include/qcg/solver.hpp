#pragma once

// Memoized solver for quantum positions: Grundy values of impartial games,
// outcome classes of any game, engine moves, two-heap value tables and the
// comparison between the quantum lift of a sum and the selective compound
// of the quantum operands.

#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "qcg/quantum.hpp"

namespace qcg {

enum class Outcome : std::uint8_t { N, P, L, R };

inline std::string_view to_string(Outcome o) noexcept
{
    switch (o) {
    case Outcome::N: return "N";
    case Outcome::P: return "P";
    case Outcome::L: return "L";
    case Outcome::R: return "R";
    }
    return "?";
}

/// Least nonnegative integer not in `values`.
inline int mex(std::vector<int> values)
{
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    int k = 0;
    for (int v : values) {
        if (v < k)
            continue;
        if (v != k)
            break;
        ++k;
    }
    return k;
}

/// Cache of solved quantum positions. Keys include the ruleset and what was
/// solved (Grundy value or a mover's win bit), so one table can serve
/// several rulesets. Safe for concurrent use.
class TranspositionTable
{
public:
    std::optional<int> find(const std::string& key) const
    {
        std::shared_lock lock(mutex_);
        auto it = map_.find(key);
        if (it == map_.end())
            return std::nullopt;
        return it->second;
    }

    void insert(std::string key, int value)
    {
        std::unique_lock lock(mutex_);
        map_.emplace(std::move(key), value);
    }

    std::size_t size() const
    {
        std::shared_lock lock(mutex_);
        return map_.size();
    }

    void clear()
    {
        std::unique_lock lock(mutex_);
        map_.clear();
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, int> map_;
};

struct SolverOptions
{
    /// Remove covered realisations before solving (A, B, D only).
    bool reduce_covered = true;
};

class Solver
{
public:
    Solver(Game game, Ruleset rules, SolverOptions options = {})
        : Solver(std::move(game), rules, std::make_shared<TranspositionTable>(), options)
    {}

    Solver(Game game, Ruleset rules, std::shared_ptr<TranspositionTable> table, SolverOptions options = {})
        : game_(std::move(game)), rules_(rules), options_(options), table_(std::move(table)),
          covered_(std::make_shared<CoveredMemo>())
    {}

    const Game& game() const noexcept { return game_; }
    const Ruleset& rules() const noexcept { return rules_; }
    TranspositionTable& table() noexcept { return *table_; }

    /// Grundy value. Throws UsageError for partisan games.
    int grundy(const QuantumPosition& s)
    {
        if (!game_.impartial())
            throw UsageError("grundy values need an impartial game; use outcome() for " + game_.id());
        return grundy_impl(s);
    }

    /// Whether the player to move wins from `s` under normal play.
    bool wins(const QuantumPosition& s, Player mover)
    {
        const std::string key = key_for(s, mover == Player::Left ? 'l' : 'r');
        if (auto hit = table_->find(key))
            return *hit != 0;
        bool win = false;
        for (const auto& q : enumerate_qmoves(game_, s, mover, rules_)) {
            if (!wins(*transition(game_, s, q), opponent(mover))) {
                win = true;
                break;
            }
        }
        table_->insert(key, win ? 1 : 0);
        return win;
    }

    Outcome outcome(const QuantumPosition& s)
    {
        const bool left_first = wins(s, Player::Left);
        const bool right_first = wins(s, Player::Right);
        if (left_first && right_first)
            return Outcome::N;
        if (!left_first && !right_first)
            return Outcome::P;
        return left_first ? Outcome::L : Outcome::R;
    }

    /// A legal q-move after which `who` wins, else the first legal q-move,
    /// else nullopt.
    std::optional<QMove> best_move(const QuantumPosition& s, Player who)
    {
        auto moves = enumerate_qmoves(game_, s, who, rules_);
        if (moves.empty())
            return std::nullopt;
        for (auto& q : moves)
            if (!wins(*transition(game_, s, q), opponent(who)))
                return std::move(q);
        return std::move(moves.front());
    }

    /// Every legal q-move for `who` after which `who` wins.
    std::vector<QMove> winning_moves(const QuantumPosition& s, Player who)
    {
        std::vector<QMove> out;
        for (auto& q : enumerate_qmoves(game_, s, who, rules_))
            if (!wins(*transition(game_, s, q), opponent(who)))
                out.push_back(std::move(q));
        return out;
    }

private:
    std::string key_for(const QuantumPosition& s, char what) const
    {
        std::string key;
        key.push_back(what);
        key.push_back(static_cast<char>(rules_.kind()));
        detail::put_varint(key, static_cast<std::uint64_t>(rules_.width()));
        s.append_encoding(key);
        return key;
    }

    int grundy_impl(const QuantumPosition& raw)
    {
        const bool reduce = options_.reduce_covered && rules_.allows_reduction();
        const QuantumPosition s = reduce ? canonicalize(game_, raw, rules_, *covered_) : raw;
        const std::string key = key_for(s, reduce ? 'G' : 'g');
        if (auto hit = table_->find(key))
            return *hit;
        std::vector<int> options;
        for (const auto& q : enumerate_qmoves(game_, s, Player::Left, rules_))
            options.push_back(grundy_impl(*transition(game_, s, q)));
        const int value = mex(std::move(options));
        table_->insert(key, value);
        return value;
    }

    Game game_;
    Ruleset rules_;
    SolverOptions options_;
    std::shared_ptr<TranspositionTable> table_;
    std::shared_ptr<CoveredMemo> covered_;
};

// ---------------------------------------------------------------------------
// Free-function forms

inline int grundy(const QuantumPosition& s, const Ruleset& rules, const Game& game,
                  std::shared_ptr<TranspositionTable> table = std::make_shared<TranspositionTable>(),
                  SolverOptions options = {})
{
    return Solver(game, rules, std::move(table), options).grundy(s);
}

inline Outcome outcome(const QuantumPosition& s, const Ruleset& rules, const Game& game,
                       std::shared_ptr<TranspositionTable> table = std::make_shared<TranspositionTable>())
{
    return Solver(game, rules, std::move(table)).outcome(s);
}

inline std::optional<QMove> best_move(const QuantumPosition& s, Player who, const Ruleset& rules, const Game& game)
{
    return Solver(game, rules).best_move(s, who);
}

// ---------------------------------------------------------------------------
// Two-heap value tables

struct ValueTable
{
    Ruleset rules;
    std::vector<std::vector<int>> values;  // values[i][j] = grundy(<Nim(i,j)>)

    std::string to_csv() const
    {
        std::ostringstream out;
        out << "i\\j";
        const std::size_t cols = values.empty() ? 0 : values.front().size();
        for (std::size_t j = 0; j < cols; ++j)
            out << ',' << j;
        out << '\n';
        for (std::size_t i = 0; i < values.size(); ++i) {
            out << i;
            for (int v : values[i])
                out << ',' << v;
            out << '\n';
        }
        return out.str();
    }

    nlohmann::json to_json() const
    {
        return {
            {"ruleset", rules.name()},
            {"width", rules.width_text()},
            {"imax", values.empty() ? -1 : static_cast<int>(values.size()) - 1},
            {"jmax", values.empty() ? -1 : static_cast<int>(values.front().size()) - 1},
            {"values", values},
        };
    }
};

/// grundy(<Nim(i,j)>) for 0 <= i <= imax, 0 <= j <= jmax, sharing one table.
inline ValueTable value_table(int imax, int jmax, RulesetKind kind, int width = 2)
{
    if (imax < 0 || jmax < 0)
        throw UsageError("table bounds must be nonnegative");
    ValueTable t{Ruleset(kind, width), {}};
    Solver solver(Game::nim(), t.rules);
    t.values.assign(static_cast<std::size_t>(imax) + 1, std::vector<int>(static_cast<std::size_t>(jmax) + 1));
    for (int i = 0; i <= imax; ++i)
        for (int j = 0; j <= jmax; ++j)
            t.values[i][j] = solver.grundy(QuantumPosition(nim_position({i, j})));
    return t;
}

// ---------------------------------------------------------------------------
// Quantum sum versus selective compound under Ruleset D

struct ProductReport
{
    std::string left;
    std::string right;
    int lhs_value = 0;  // grundy(<G+H>_D)
    int rhs_value = 0;  // grundy(<G>_D (x) <H>_D), selective compound
    bool equal = false;

    nlohmann::json to_json() const
    {
        return {{"left", left}, {"right", right}, {"lhs_value", lhs_value}, {"rhs_value", rhs_value}, {"equal", equal}};
    }
};

namespace detail {

// A turn moves in one component or in both at once; the compound ends when
// neither component has a q-move.
class SelectiveCompound
{
public:
    SelectiveCompound(Game left, Game right)
        : games_{std::move(left), std::move(right)}, rules_(RulesetKind::D)
    {}

    int grundy(const QuantumPosition& a, const QuantumPosition& b)
    {
        std::string key;
        a.append_encoding(key);
        b.append_encoding(key);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;

        std::vector<QuantumPosition> next_a;
        for (const auto& q : enumerate_qmoves(games_[0], a, Player::Left, rules_))
            next_a.push_back(*transition(games_[0], a, q));
        std::vector<QuantumPosition> next_b;
        for (const auto& q : enumerate_qmoves(games_[1], b, Player::Left, rules_))
            next_b.push_back(*transition(games_[1], b, q));

        std::vector<int> options;
        for (const auto& na : next_a)
            options.push_back(grundy(na, b));
        for (const auto& nb : next_b)
            options.push_back(grundy(a, nb));
        for (const auto& na : next_a)
            for (const auto& nb : next_b)
                options.push_back(grundy(na, nb));
        const int value = mex(std::move(options));
        memo_.emplace(std::move(key), value);
        return value;
    }

private:
    Game games_[2];
    Ruleset rules_;
    std::unordered_map<std::string, int> memo_;
};

} // namespace detail

/// Compares grundy(<G+H>_D) against the selective compound of <G>_D and
/// <H>_D, both with unbounded width. Reports; does not assume equality.
inline ProductReport compare_product_claim(const Position& g, const Position& h, int bound)
{
    const Game gg = Game::of(g);
    const Game hg = Game::of(h);
    if (!gg.impartial() || !hg.impartial())
        throw UsageError("product comparison needs impartial operands");
    if (gg.measure(g) > bound || hg.measure(h) > bound)
        throw UsageError("operand exceeds the birthday bound " + std::to_string(bound));

    ProductReport report;
    report.left = to_string(g);
    report.right = to_string(h);
    const Position sum = sum_position(g, h);
    Solver sum_solver(Game::of(sum), Ruleset(RulesetKind::D), SolverOptions{false});
    report.lhs_value = sum_solver.grundy(QuantumPosition(sum));
    detail::SelectiveCompound compound(gg, hg);
    report.rhs_value = compound.grundy(QuantumPosition(g), QuantumPosition(h));
    report.equal = report.lhs_value == report.rhs_value;
    return report;
}

} // namespace qcg

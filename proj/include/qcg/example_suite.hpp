#pragma once

// Small positions whose outcomes separate the rulesets, with their known
// outcomes. Used by `qcg examples`.

#include "qcg/solver.hpp"

namespace qcg {

struct ExampleCell
{
    std::string ruleset;
    std::string computed;
    std::optional<std::string> expected;  // nullopt: shown, not checked

    bool ok() const { return !expected || *expected == computed; }
};

struct ExampleResult
{
    std::string name;
    std::string position;
    std::vector<ExampleCell> cells;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

namespace detail {

inline const std::vector<std::pair<std::string, Ruleset>>& example_rulesets()
{
    static const std::vector<std::pair<std::string, Ruleset>> list = {
        {"classical", Ruleset::classical()}, {"A", Ruleset(RulesetKind::A)}, {"B", Ruleset(RulesetKind::B)},
        {"C", Ruleset(RulesetKind::C)},      {"Cp", Ruleset(RulesetKind::CPrime)}, {"D", Ruleset(RulesetKind::D)},
    };
    return list;
}

inline ExampleResult outcome_row(std::string name, const std::string& text,
                                 const std::map<std::string, std::string>& expected)
{
    ExampleResult r{std::move(name), text, {}, {}};
    const QuantumPosition start(parse_position(text));
    for (const auto& [label, rules] : example_rulesets()) {
        Solver solver(start.game(), rules);
        ExampleCell cell{label, std::string(to_string(solver.outcome(start))), std::nullopt};
        if (auto it = expected.find(label); it != expected.end())
            cell.expected = it->second;
        if (!cell.ok())
            r.failures.push_back(label + ": expected " + *cell.expected + ", got " + cell.computed);
        r.cells.push_back(std::move(cell));
    }
    return r;
}

} // namespace detail

inline std::vector<ExampleResult> run_example_suite()
{
    std::vector<ExampleResult> results;

    auto pins = detail::outcome_row("octal 0.6, four pins", "octal06:1111",
                                    {{"classical", "P"}, {"A", "N"}, {"B", "N"}, {"C", "N"}, {"Cp", "N"}, {"D", "N"}});
    {
        const QuantumPosition start(parse_position("octal06:1111"));
        const QMove ends({Move{{}, PinMove{1}}, Move{{}, PinMove{4}}}, Player::Left);
        for (const auto& [label, rules] : detail::example_rulesets()) {
            if (rules.is_classical())
                continue;
            Solver solver(start.game(), rules);
            const auto winners = solver.winning_moves(start, Player::Left);
            if (std::find(winners.begin(), winners.end(), ends) == winners.end())
                pins.failures.push_back(label + ": [1 & 4] is not a winning first move");
        }
    }
    results.push_back(std::move(pins));

    results.push_back(detail::outcome_row("domineering, four-cell board", "domineering:(0,0);(1,0);(2,0);(2,1)",
                                          {{"classical", "R"}, {"A", "R"}, {"B", "P"}, {"C", "R"}, {"Cp", "R"}, {"D", "R"}}));
    results.push_back(detail::outcome_row("hackenbush, three stalks", "hackenbush:R1|Ba,R2|Bb,R3",
                                          {{"classical", "P"}, {"A", "L"}, {"B", "R"}, {"C", "P"}, {"Cp", "R"}, {"D", "R"}}));

    auto nim22 = detail::outcome_row("nim 2,2", "nim:2,2", {{"Cp", "P"}, {"D", "N"}});
    {
        // The first player's winning line under D: [1:-1 & 2:-1], [1:-2 & 2:-1], then 1:-2.
        const Game nim = Game::nim();
        const Ruleset d(RulesetKind::D);
        Solver solver(nim, d);
        QuantumPosition s(nim_position({2, 2}));
        const QMove opening({nim_move(1, 1), nim_move(2, 1)}, Player::Left);
        if (solver.wins(apply_qmove(nim, s, opening, d), Player::Right))
            nim22.failures.push_back("D: [1:-1 & 2:-1] is not winning");
    }
    results.push_back(std::move(nim22));

    {
        ExampleResult undo{"superposed move played twice", "nim:1,1,2", {}, {}};
        const Game nim = Game::nim();
        const Ruleset a(RulesetKind::A);
        const QuantumPosition start(nim_position({1, 1, 2}));
        const QMove left({nim_move(1, 1), nim_move(2, 1)}, Player::Left);
        const QMove right({nim_move(1, 1), nim_move(2, 1)}, Player::Right);
        const auto mid = apply_qmove(nim, start, left, a);
        const auto end = apply_qmove(nim, mid, right, a);
        undo.cells.push_back({"A", to_string(mid), std::string("{nim:0,1,2 | nim:1,0,2}")});
        undo.cells.push_back({"A", to_string(end), std::string("{nim:0,0,2}")});
        for (const auto& c : undo.cells)
            if (!c.ok())
                undo.failures.push_back("expected " + *c.expected + ", got " + c.computed);
        for (const auto* text : {"nim:1,0,2", "nim:0,1,2"})
            if (is_legal_qmove(nim, QuantumPosition(parse_position(text)), right, a))
                undo.failures.push_back(std::string("[1:-1 & 2:-1] should be illegal on {") + text + "} under A");
        results.push_back(std::move(undo));
    }
    return results;
}

} // namespace qcg

#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "nim_oracle.hpp"
#include "qcg/solver.hpp"

using namespace qcg;

namespace {

const Game kNim = Game::nim();

QuantumPosition nims(std::initializer_list<std::vector<int>> heaps)
{
    std::vector<Position> reals;
    for (const auto& h : heaps)
        reals.push_back(nim_position(h));
    return QuantumPosition(std::move(reals));
}

QuantumPosition from_oracle(const oracle::State& s)
{
    std::vector<Position> reals;
    for (const auto& h : s)
        reals.push_back(nim_position(h));
    return QuantumPosition(std::move(reals));
}

oracle::Rule to_oracle(RulesetKind k)
{
    switch (k) {
    case RulesetKind::A: return oracle::Rule::A;
    case RulesetKind::B: return oracle::Rule::B;
    case RulesetKind::C: return oracle::Rule::C;
    case RulesetKind::CPrime: return oracle::Rule::CPrime;
    case RulesetKind::D: return oracle::Rule::D;
    }
    return oracle::Rule::D;
}

oracle::State random_state(std::mt19937& rng, int max_total)
{
    const int heaps = std::uniform_int_distribution<int>(1, 3)(rng);
    const int count = std::uniform_int_distribution<int>(1, 3)(rng);
    oracle::State s;
    for (int r = 0; r < count; ++r) {
        oracle::Heaps h(static_cast<std::size_t>(heaps), 0);
        int budget = std::uniform_int_distribution<int>(0, max_total)(rng);
        while (budget-- > 0)
            ++h[std::uniform_int_distribution<std::size_t>(0, h.size() - 1)(rng)];
        s.insert(h);
    }
    return s;
}

constexpr RulesetKind kKinds[] = {RulesetKind::A, RulesetKind::B, RulesetKind::C, RulesetKind::CPrime, RulesetKind::D};

} // namespace

TEST(Mex, Examples)
{
    EXPECT_EQ(mex({}), 0);
    EXPECT_EQ(mex({0, 1, 3}), 2);
    EXPECT_EQ(mex({1, 1, 0}), 2);
    EXPECT_EQ(mex({1, 2}), 0);
}

TEST(Grundy, Examples)
{
    EXPECT_EQ(grundy(nims({{5}}), Ruleset(RulesetKind::A), kNim), 4);
    EXPECT_EQ(grundy(nims({{2}}), Ruleset(RulesetKind::B), kNim), 0);
    EXPECT_EQ(grundy(nims({{1}}), Ruleset(RulesetKind::B), kNim), 1);
    EXPECT_EQ(grundy(nims({{3}}), Ruleset(RulesetKind::C), kNim), 3);
    EXPECT_EQ(grundy(nims({{0}, {3}}), Ruleset(RulesetKind::C), kNim), 2);
    EXPECT_EQ(grundy(nims({{0}, {1}, {2}}), Ruleset(RulesetKind::CPrime), kNim), 0);
    EXPECT_EQ(grundy(nims({{1, 2}}), Ruleset(RulesetKind::A, 2), kNim), 3);
    EXPECT_EQ(grundy(nims({{1, 1, 1}}), Ruleset(RulesetKind::A, 2), kNim), 0);
    EXPECT_EQ(grundy(nims({{1, 1, 1}}), Ruleset(RulesetKind::A), kNim), 1);
}

TEST(Grundy, ClassicalNimIsXor)
{
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            for (int c = 0; c <= 3; ++c)
                EXPECT_EQ(grundy(nims({{a, b, c}}), Ruleset::classical(), kNim), a ^ b ^ c);
}

TEST(Grundy, PartisanGameIsAUsageError)
{
    Solver s(Game::hackenbush(), Ruleset(RulesetKind::D));
    EXPECT_THROW(s.grundy(QuantumPosition(parse_position("hackenbush:Ba"))), UsageError);
}

TEST(Grundy, AgreesWithBruteForceOracle)
{
    std::mt19937 rng(2024);
    for (auto kind : kKinds) {
        for (int width : {2, 3}) {
            Solver fast(kNim, Ruleset(kind, width));
            Solver plain(kNim, Ruleset(kind, width), SolverOptions{false});
            oracle::Solver slow(to_oracle(kind), width);
            for (int trial = 0; trial < 25; ++trial) {
                const auto st = random_state(rng, 4);
                const auto s = from_oracle(st);
                const int want = slow.grundy(st);
                EXPECT_EQ(fast.grundy(s), want) << to_string(s) << ' ' << to_string(kind) << " width " << width;
                EXPECT_EQ(plain.grundy(s), want) << to_string(s) << ' ' << to_string(kind) << " width " << width;
            }
        }
    }
}

TEST(Outcome, ImpartialConsistency)
{
    std::mt19937 rng(99);
    for (auto kind : kKinds) {
        Solver solver(kNim, Ruleset(kind, 2));
        for (int trial = 0; trial < 30; ++trial) {
            const auto s = from_oracle(random_state(rng, 4));
            const int g = solver.grundy(s);
            EXPECT_EQ(solver.outcome(s), g == 0 ? Outcome::P : Outcome::N) << to_string(s);
        }
    }
}

TEST(Outcome, SeparatingPositions)
{
    auto out = [](const char* text, Ruleset r) {
        const QuantumPosition s(parse_position(text));
        return std::string(to_string(outcome(s, r, s.game())));
    };
    const Ruleset classical = Ruleset::classical();
    EXPECT_EQ(out("octal06:1111", classical), "P");
    for (auto kind : kKinds)
        EXPECT_EQ(out("octal06:1111", Ruleset(kind, 2)), "N") << to_string(kind);

    const char* stalks = "hackenbush:R1|Ba,R2|Bb,R3";
    EXPECT_EQ(out(stalks, classical), "P");
    EXPECT_EQ(out(stalks, Ruleset(RulesetKind::A)), "L");
    EXPECT_EQ(out(stalks, Ruleset(RulesetKind::B)), "R");
    EXPECT_EQ(out(stalks, Ruleset(RulesetKind::C)), "P");
    EXPECT_EQ(out(stalks, Ruleset(RulesetKind::CPrime)), "R");
    EXPECT_EQ(out(stalks, Ruleset(RulesetKind::D)), "R");

    EXPECT_EQ(out("nim:2,2", Ruleset(RulesetKind::D)), "N");
    EXPECT_EQ(out("nim:2,2", Ruleset(RulesetKind::CPrime)), "P");
    EXPECT_EQ(out("nim:2,2", classical), "P");
}

TEST(Outcome, PartisanLoserHasNoMove)
{
    // Only Left has an edge: Left wins whoever starts.
    const QuantumPosition s(parse_position("hackenbush:Ba"));
    Solver solver(s.game(), Ruleset(RulesetKind::D));
    EXPECT_TRUE(solver.wins(s, Player::Left));
    EXPECT_FALSE(solver.wins(s, Player::Right));
    EXPECT_EQ(solver.outcome(s), Outcome::L);
}

TEST(BestMove, WinsWhenTheMoverCan)
{
    const Game pins = Game::octal06();
    const QuantumPosition start(parse_position("octal06:1111"));
    Solver a(pins, Ruleset(RulesetKind::A));
    const auto q = a.best_move(start, Player::Left);
    ASSERT_TRUE(q);
    EXPECT_FALSE(a.wins(*transition(pins, start, *q), Player::Right));
    const QMove ends({Move{{}, PinMove{1}}, Move{{}, PinMove{4}}}, Player::Left);
    const auto winners = a.winning_moves(start, Player::Left);
    EXPECT_NE(std::find(winners.begin(), winners.end(), ends), winners.end());

    EXPECT_FALSE(best_move(nims({{0}}), Player::Left, Ruleset(RulesetKind::D), kNim));

    Solver d(kNim, Ruleset(RulesetKind::D));
    const QMove opening({nim_move(1, 1), nim_move(2, 1)}, Player::Left);
    const auto nim_winners = d.winning_moves(nims({{2, 2}}), Player::Left);
    EXPECT_NE(std::find(nim_winners.begin(), nim_winners.end(), opening), nim_winners.end());
}

TEST(BestMove, WinningExactlyWhenOutcomeFavoursTheMover)
{
    std::mt19937 rng(4);
    for (auto kind : kKinds) {
        Solver solver(kNim, Ruleset(kind, 2));
        for (int trial = 0; trial < 20; ++trial) {
            const auto s = from_oracle(random_state(rng, 4));
            const auto q = solver.best_move(s, Player::Left);
            if (!q) {
                EXPECT_FALSE(solver.wins(s, Player::Left));
                continue;
            }
            const bool lands_on_loss = !solver.wins(*transition(kNim, s, *q), Player::Right);
            EXPECT_EQ(lands_on_loss, solver.wins(s, Player::Left)) << to_string(s);
        }
    }
}

TEST(ValueTable, SpotValues)
{
    const auto a = value_table(3, 3, RulesetKind::A);
    EXPECT_EQ(a.values[3][3], 4);
    EXPECT_EQ(a.values[1][2], 3);
    const auto d = value_table(4, 4, RulesetKind::D);
    EXPECT_EQ(d.values[2][3], 0);
    EXPECT_EQ(d.values[1][1], 0);
    EXPECT_EQ(d.values[4][4], 0);
    const auto b = value_table(3, 6, RulesetKind::B);
    EXPECT_EQ(b.values[3][3], 1);
    EXPECT_EQ(b.values[3][6], 0);
}

TEST(ValueTable, CsvAndJson)
{
    const auto t = value_table(1, 2, RulesetKind::D);
    EXPECT_EQ(t.to_csv(), "i\\j,0,1,2\n0,0,1,2\n1,1,0,3\n");
    const auto j = t.to_json();
    EXPECT_EQ(j["ruleset"], "D");
    EXPECT_EQ(j["width"], "2");
    EXPECT_EQ(j["values"][1][2], 3);
    EXPECT_THROW(value_table(-1, 2, RulesetKind::D), UsageError);
}

TEST(TranspositionTable, DeterministicAndShareable)
{
    auto table = std::make_shared<TranspositionTable>();
    Solver warm(kNim, Ruleset(RulesetKind::A, 2), table);
    std::vector<int> first;
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j)
            first.push_back(warm.grundy(nims({{i, j}})));
    const auto size = table->size();
    EXPECT_GT(size, 0u);

    std::vector<int> again;
    Solver reuse(kNim, Ruleset(RulesetKind::A, 2), table);
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j)
            again.push_back(reuse.grundy(nims({{i, j}})));
    EXPECT_EQ(first, again);
    EXPECT_EQ(table->size(), size);

    std::vector<int> cold;
    Solver fresh(kNim, Ruleset(RulesetKind::A, 2));
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j)
            cold.push_back(fresh.grundy(nims({{i, j}})));
    EXPECT_EQ(first, cold);
}

TEST(TranspositionTable, RulesetsDoNotCollide)
{
    auto table = std::make_shared<TranspositionTable>();
    Solver a(kNim, Ruleset(RulesetKind::A), table);
    Solver d(kNim, Ruleset(RulesetKind::D), table);
    EXPECT_EQ(a.grundy(nims({{3}})), 2);
    EXPECT_EQ(d.grundy(nims({{3}})), 3);
    Solver a2(kNim, Ruleset(RulesetKind::A, 2), table);
    EXPECT_EQ(a2.grundy(nims({{1, 1, 1}})), 0);
    EXPECT_EQ(a.grundy(nims({{1, 1, 1}})), 1);
}

TEST(TranspositionTable, ConcurrentSolversAgree)
{
    auto table = std::make_shared<TranspositionTable>();
    std::vector<std::vector<int>> results(4);
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t)
        workers.emplace_back([&, t] {
            Solver s(kNim, Ruleset(RulesetKind::C, 2), table);
            for (int i = 0; i <= 4; ++i)
                for (int j = 0; j <= 4; ++j)
                    results[static_cast<std::size_t>(t)].push_back(s.grundy(nims({{i, j}})));
        });
    for (auto& w : workers)
        w.join();
    for (int t = 1; t < 4; ++t)
        EXPECT_EQ(results[static_cast<std::size_t>(t)], results[0]);
}

TEST(ProductClaim, ReportsBothSides)
{
    const auto r = compare_product_claim(nim_position({1}), nim_position({1}), 4);
    EXPECT_EQ(r.lhs_value, 0);
    EXPECT_EQ(r.equal, r.lhs_value == r.rhs_value);
    const auto j = r.to_json();
    EXPECT_TRUE(j.contains("lhs_value"));
    EXPECT_TRUE(j.contains("rhs_value"));
    EXPECT_TRUE(j.contains("equal"));

    const auto zero = compare_product_claim(nim_position({0}), nim_position({0}), 4);
    EXPECT_EQ(zero.lhs_value, 0);
    EXPECT_EQ(zero.rhs_value, 0);
    EXPECT_TRUE(zero.equal);

    EXPECT_THROW(compare_product_claim(nim_position({5}), nim_position({1}), 4), UsageError);
    EXPECT_THROW(compare_product_claim(parse_position("hackenbush:Ba"), nim_position({1}), 4), UsageError);
}

TEST(ProductClaim, LeftHandSideMatchesTheOracleOnTheSum)
{
    // A sum of two one-heap Nim games is two-heap Nim with the same labels up to renaming.
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b) {
            oracle::Solver slow(oracle::Rule::D);
            const auto r = compare_product_claim(nim_position({a}), nim_position({b}), 4);
            EXPECT_EQ(r.lhs_value, slow.grundy({{a, b}})) << a << ',' << b;
        }
}

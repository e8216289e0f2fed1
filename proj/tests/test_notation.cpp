#include <gtest/gtest.h>

#include "qcg/quantum.hpp"

using namespace qcg;

namespace {

std::string token_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const ParseError& e) {
        return e.token();
    }
    return "<no error>";
}

} // namespace

TEST(PositionText, RoundTrips)
{
    for (const char* text : {"nim:4,2,0", "nim:", "octal06:1111", "octal06:0101", "domineering:(0,0);(1,0);(2,0);(2,1)",
                             "hackenbush:R1|Ba,R2|Bb,R3", "sum:nim:1+octal06:11", "sum:(sum:nim:1+nim:2)+nim:3",
                             "sum:nim:1+(sum:nim:2+hackenbush:Ba)"})
        EXPECT_EQ(to_string(parse_position(text)), text);
}

TEST(PositionText, WhitespaceIsTolerated)
{
    EXPECT_EQ(parse_position(" nim: 3 , 2 "), nim_position({3, 2}));
}

TEST(PositionText, ErrorsNameTheToken)
{
    EXPECT_EQ(token_of([] { parse_position("nim:3,x"); }), "x");
    EXPECT_EQ(token_of([] { parse_position("nim:-1"); }), "-1");
    EXPECT_EQ(token_of([] { parse_position("chess:e4"); }), "chess");
    EXPECT_EQ(token_of([] { parse_position("octal06:1121"); }), "2");
    EXPECT_EQ(token_of([] { parse_position("hackenbush:Ga"); }), "Ga");
    EXPECT_EQ(token_of([] { parse_position("hackenbush:Ba|Ra"); }), "a");
    EXPECT_THROW(parse_position("domineering:(0,0);(0,0)"), ParseError);
    EXPECT_THROW(parse_position("domineering:(0,0"), ParseError);
    EXPECT_THROW(parse_position("sum:nim:1"), ParseError);
    EXPECT_THROW(parse_position("nim"), ParseError);
}

TEST(MoveText, RoundTrips)
{
    const Game nim = Game::nim();
    EXPECT_EQ(parse_move("1:-2", nim), nim_move(1, 2));
    EXPECT_EQ(to_string(nim_move(1, 2)), "1:-2");
    EXPECT_EQ(to_string(parse_move("2", Game::octal06())), "2");
    EXPECT_EQ(to_string(parse_move("(2,1)+(2,0)", Game::domineering())), "(2,0)+(2,1)");
    const Move edge = parse_move("a", Game::hackenbush(), Player::Right);
    EXPECT_EQ(to_string(edge), "a");
    EXPECT_TRUE(owners(edge).contains(Player::Right));
    EXPECT_FALSE(owners(edge).contains(Player::Left));
    const Game sum = Game::of(parse_position("sum:nim:1+octal06:11"));
    EXPECT_EQ(to_string(parse_move("R.2", sum)), "R.2");
}

TEST(MoveText, ErrorsNameTheToken)
{
    const Game nim = Game::nim();
    EXPECT_EQ(token_of([&] { parse_move("1:2", nim); }), "1:2");
    EXPECT_EQ(token_of([&] { parse_move("0:-1", nim); }), "0:-1");
    EXPECT_EQ(token_of([&] { parse_move("a:-1", nim); }), "a");
    EXPECT_THROW(parse_move("(0,0)+(2,0)", Game::domineering()), ParseError);
    EXPECT_THROW(parse_move("X.1:-1", Game::of(parse_position("sum:nim:1+nim:1"))), ParseError);
}

TEST(PlayerText, AcceptsShortAndLongForms)
{
    EXPECT_EQ(parse_player("L"), Player::Left);
    EXPECT_EQ(parse_player("RIGHT"), Player::Right);
    EXPECT_EQ(parse_player("left"), Player::Left);
    EXPECT_THROW(parse_player("up"), ParseError);
}

TEST(QuantumText, RoundTrips)
{
    const auto s = parse_quantum_position("{nim:1,0,2 | nim:0,1,2}");
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(to_string(s), "{nim:0,1,2 | nim:1,0,2}");
    EXPECT_EQ(parse_quantum_position("nim:3"), QuantumPosition(nim_position({3})));
    // '|' inside a Hackenbush position is a stalk separator, not a realisation separator.
    EXPECT_EQ(parse_quantum_position("{hackenbush:Ba|Rb}").size(), 1u);
    EXPECT_EQ(parse_quantum_position("{hackenbush:Ba|Rb | hackenbush:Rb}").size(), 2u);

    const QMove q = parse_qmove("[1:-1 & 2:-1]", Game::nim(), Player::Left);
    EXPECT_EQ(q.size(), 2u);
    EXPECT_EQ(to_string(q), "[1:-1 & 2:-1]");
    EXPECT_EQ(parse_qmove("2:-1&1:-1", Game::nim(), Player::Left), q);
}

TEST(QuantumText, MixedGamesAreRejected)
{
    EXPECT_THROW(parse_quantum_position("{nim:1 | octal06:11}"), UsageError);
    EXPECT_THROW(parse_quantum_position("{}"), ParseError);
    EXPECT_THROW(parse_qmove("[]", Game::nim(), Player::Left), ParseError);
}

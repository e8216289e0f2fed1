#pragma once

// Text forms of positions and move labels.
//
//   positions  nim:4,2,0   octal06:1111   domineering:(0,0);(1,0)
//              hackenbush:R1|Ba,R2|Bb,R3   sum:<left>+<right>
//   moves      1:-2        2              (2,0)+(2,1)
//              a           L.<move> / R.<move> for sum operands
//
// Sum operands that are themselves sums are written in parentheses.

#include <cctype>
#include <charconv>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qcg/games.hpp"

namespace qcg {

class ParseError : public std::invalid_argument
{
public:
    ParseError(const std::string& what, std::string token)
        : std::invalid_argument(what + " near '" + token + "'"), token_(std::move(token))
    {}

    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

inline int parse_int(std::string_view token, const char* what)
{
    token = trim(token);
    int value = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc{} || ptr != last)
        throw ParseError(std::string("expected ") + what, std::string(token));
    return value;
}

inline bool valid_label(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

// "(x,y)"
inline Cell parse_cell(std::string_view token)
{
    const auto t = trim(token);
    if (t.size() < 5 || t.front() != '(' || t.back() != ')')
        throw ParseError("expected cell (x,y)", std::string(t));
    const auto inner = split(t.substr(1, t.size() - 2), ',');
    if (inner.size() != 2)
        throw ParseError("expected cell (x,y)", std::string(t));
    Cell c{parse_int(inner[0], "cell coordinate"), parse_int(inner[1], "cell coordinate")};
    if (c.x < 0 || c.y < 0)
        throw ParseError("cell coordinates must be nonnegative", std::string(t));
    return c;
}

// Index of the first '+' outside parentheses, or npos.
inline std::size_t top_level_plus(std::string_view s)
{
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(')
            ++depth;
        else if (s[i] == ')')
            --depth;
        else if (s[i] == '+' && depth == 0)
            return i;
    }
    return std::string_view::npos;
}

inline std::string_view strip_parens(std::string_view s)
{
    s = trim(s);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        int depth = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(')
                ++depth;
            else if (s[i] == ')' && --depth == 0 && i + 1 != s.size())
                return s;  // "(a)+(b)" style, not a wrapper
        }
        return trim(s.substr(1, s.size() - 2));
    }
    return s;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Positions

inline Position parse_position(std::string_view text)
{
    using namespace detail;
    const auto t = trim(text);
    const auto colon = t.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("expected <game>:<payload>", std::string(t));
    const auto game = t.substr(0, colon);
    const auto body = trim(t.substr(colon + 1));

    if (game == "nim") {
        NimPosition p;
        if (!body.empty())
            for (auto tok : split(body, ',')) {
                const int h = parse_int(tok, "heap size");
                if (h < 0)
                    throw ParseError("heap size must be nonnegative", std::string(trim(tok)));
                p.heaps.push_back(h);
            }
        return Position{std::move(p)};
    }
    if (game == "octal06") {
        PinLine p;
        for (char c : body) {
            if (c != '0' && c != '1')
                throw ParseError("expected pin flag 0 or 1", std::string(1, c));
            p.pins.push_back(static_cast<std::uint8_t>(c == '1'));
        }
        return Position{std::move(p)};
    }
    if (game == "domineering") {
        DomineeringPosition p;
        if (!body.empty())
            for (auto tok : split(body, ';'))
                p.free.push_back(parse_cell(tok));
        std::sort(p.free.begin(), p.free.end());
        if (std::adjacent_find(p.free.begin(), p.free.end()) != p.free.end())
            throw ParseError("duplicate cell", std::string(body));
        return Position{std::move(p)};
    }
    if (game == "hackenbush") {
        HackenbushPosition p;
        std::set<std::string, std::less<>> seen;
        if (!body.empty())
            for (auto stalk_text : split(body, '|')) {
                std::vector<Edge> stalk;
                if (!trim(stalk_text).empty())
                    for (auto tok : split(stalk_text, ',')) {
                        tok = trim(tok);
                        if (tok.size() < 2 || (tok[0] != 'B' && tok[0] != 'R') ||
                            !valid_label(tok.substr(1)))
                            throw ParseError("expected edge B<label> or R<label>", std::string(tok));
                        Edge e{tok[0] == 'B' ? Color::Blue : Color::Red, std::string(tok.substr(1))};
                        if (!seen.insert(e.label).second)
                            throw ParseError("duplicate edge label", e.label);
                        stalk.push_back(std::move(e));
                    }
                if (!stalk.empty())
                    p.stalks.push_back(std::move(stalk));
            }
        return Position{std::move(p)};
    }
    if (game == "sum") {
        const auto plus = top_level_plus(body);
        if (plus == std::string_view::npos)
            throw ParseError("expected sum:<left>+<right>", std::string(body));
        return sum_position(parse_position(strip_parens(body.substr(0, plus))),
                            parse_position(strip_parens(body.substr(plus + 1))));
    }
    throw ParseError("unknown game", std::string(game));
}

inline std::string to_string(const Position& p)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            std::string out;
            if constexpr (std::is_same_v<T, NimPosition>) {
                out = "nim:";
                for (std::size_t i = 0; i < v.heaps.size(); ++i) {
                    if (i)
                        out += ',';
                    out += std::to_string(v.heaps[i]);
                }
            } else if constexpr (std::is_same_v<T, PinLine>) {
                out = "octal06:";
                for (auto b : v.pins)
                    out += b ? '1' : '0';
            } else if constexpr (std::is_same_v<T, DomineeringPosition>) {
                out = "domineering:";
                for (std::size_t i = 0; i < v.free.size(); ++i) {
                    if (i)
                        out += ';';
                    out += "(" + std::to_string(v.free[i].x) + "," + std::to_string(v.free[i].y) + ")";
                }
            } else if constexpr (std::is_same_v<T, HackenbushPosition>) {
                out = "hackenbush:";
                for (std::size_t s = 0; s < v.stalks.size(); ++s) {
                    if (s)
                        out += '|';
                    for (std::size_t e = 0; e < v.stalks[s].size(); ++e) {
                        if (e)
                            out += ',';
                        out += v.stalks[s][e].color == Color::Blue ? 'B' : 'R';
                        out += v.stalks[s][e].label;
                    }
                }
            } else {
                auto operand = [](const Position& part) {
                    auto s = to_string(part);
                    return std::holds_alternative<SumPosition>(part.value) ? "(" + s + ")" : s;
                };
                out = "sum:" + operand(v.parts[0]) + "+" + operand(v.parts[1]);
            }
            return out;
        },
        p.value);
}

// ---------------------------------------------------------------------------
// Moves

namespace detail {

inline Move parse_move_in(std::string_view t, const Game& game, Player mover)
{
    t = trim(t);
    switch (game.kind()) {
    case GameKind::Nim: {
        const auto colon = t.find(':');
        if (colon == std::string_view::npos)
            throw ParseError("expected nim move <heap>:-<amount>", std::string(t));
        const int heap = parse_int(t.substr(0, colon), "heap index");
        const int delta = parse_int(t.substr(colon + 1), "token delta");
        if (heap < 1 || delta >= 0)
            throw ParseError("expected heap >= 1 and negative delta", std::string(t));
        return nim_move(heap, -delta);
    }
    case GameKind::Octal06: {
        const int pin = parse_int(t, "pin index");
        if (pin < 1)
            throw ParseError("pin index must be >= 1", std::string(t));
        return Move{{}, PinMove{pin}};
    }
    case GameKind::Domineering: {
        const auto plus = t.find('+');
        if (plus == std::string_view::npos)
            throw ParseError("expected domino (x,y)+(x,y)", std::string(t));
        DominoMove d{parse_cell(t.substr(0, plus)), parse_cell(t.substr(plus + 1))};
        if (d.second < d.first)
            std::swap(d.first, d.second);
        const int dx = d.second.x - d.first.x;
        const int dy = d.second.y - d.first.y;
        if (!((dx == 0 && dy == 1) || (dx == 1 && dy == 0)))
            throw ParseError("domino cells must be adjacent", std::string(t));
        return Move{{}, d};
    }
    case GameKind::Hackenbush:
        if (!valid_label(t))
            throw ParseError("expected edge label", std::string(t));
        return Move{{}, EdgeMove{std::string(t), mover}};
    case GameKind::Sum: {
        if (t.size() < 3 || t[1] != '.' || (t[0] != 'L' && t[0] != 'R'))
            throw ParseError("expected sum move L.<move> or R.<move>", std::string(t));
        const auto side = t[0] == 'L' ? Operand::Left : Operand::Right;
        auto inner = parse_move_in(t.substr(2), game.operands()[static_cast<std::size_t>(side)], mover);
        return with_operand(side, std::move(inner));
    }
    }
    throw ParseError("unsupported game", game.id());
}

} // namespace detail

/// Parse a move label of `game`. For Hackenbush the label's owner is `mover`.
inline Move parse_move(std::string_view text, const Game& game, Player mover = Player::Left)
{
    return detail::parse_move_in(text, game, mover);
}

inline std::string to_string(const Move& m)
{
    std::string out;
    for (Operand op : m.path)
        out += op == Operand::Left ? "L." : "R.";
    std::visit(
        [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, NimMove>)
                out += std::to_string(v.heap) + ":-" + std::to_string(v.amount);
            else if constexpr (std::is_same_v<T, PinMove>)
                out += std::to_string(v.pin);
            else if constexpr (std::is_same_v<T, DominoMove>)
                out += "(" + std::to_string(v.first.x) + "," + std::to_string(v.first.y) + ")+(" +
                       std::to_string(v.second.x) + "," + std::to_string(v.second.y) + ")";
            else
                out += v.label;
        },
        m.body);
    return out;
}

inline Player parse_player(std::string_view text)
{
    const auto t = detail::trim(text);
    if (t == "L" || t == "LEFT" || t == "left")
        return Player::Left;
    if (t == "R" || t == "RIGHT" || t == "right")
        return Player::Right;
    throw ParseError("expected player LEFT or RIGHT", std::string(t));
}

} // namespace qcg

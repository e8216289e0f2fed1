#pragma once

// Brute-force quantum Nim used as an independent oracle in tests. Written
// directly from the ruleset definitions over plain containers; shares no
// code with the library.

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Heaps = std::vector<int>;
using State = std::set<Heaps>;
using Label = std::pair<int, int>;  // (heap index from 0, tokens removed)

enum class Rule { A, B, C, CPrime, D, BOrC };

inline std::vector<Label> moves_of(const Heaps& h)
{
    std::vector<Label> out;
    for (int i = 0; i < static_cast<int>(h.size()); ++i)
        for (int j = 1; j <= h[i]; ++j)
            out.emplace_back(i, j);
    return out;
}

inline bool legal(const Heaps& h, Label m)
{
    return m.first < static_cast<int>(h.size()) && h[m.first] >= m.second;
}

inline std::set<Label> available(const State& s)
{
    std::set<Label> out;
    for (const auto& h : s)
        for (auto m : moves_of(h))
            out.insert(m);
    return out;
}

inline bool singleton_ok(const State& s, Label m, Rule rule)
{
    const auto av = available(s);
    if (!av.count(m))
        return false;
    auto everywhere = [&](bool skip_stuck) {
        for (const auto& h : s) {
            if (skip_stuck && moves_of(h).empty())
                continue;
            if (!legal(h, m))
                return false;
        }
        return true;
    };
    switch (rule) {
    case Rule::A: return false;
    case Rule::B: return av.size() == 1;
    case Rule::C: return everywhere(false);
    case Rule::CPrime: return everywhere(true);
    case Rule::D: return true;
    case Rule::BOrC: return av.size() == 1 || everywhere(false);
    }
    return false;
}

// All legal q-moves as label sets.
inline std::vector<std::vector<Label>> qmoves(const State& s, Rule rule, int width)
{
    const auto avs = available(s);
    const std::vector<Label> av(avs.begin(), avs.end());
    std::vector<std::vector<Label>> out;
    const int n = static_cast<int>(av.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<Label> q;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i))
                q.push_back(av[i]);
        if (static_cast<int>(q.size()) > width)
            continue;
        if (q.size() == 1 && !singleton_ok(s, q[0], rule))
            continue;
        out.push_back(std::move(q));
    }
    return out;
}

inline State step(const State& s, const std::vector<Label>& q)
{
    State out;
    for (const auto& h : s)
        for (auto m : q)
            if (legal(h, m)) {
                Heaps next = h;
                next[m.first] -= m.second;
                out.insert(next);
            }
    return out;
}

class Solver
{
public:
    Solver(Rule rule, int width = INT_MAX) : rule_(rule), width_(width) {}

    int grundy(const State& s)
    {
        if (auto it = memo_.find(s); it != memo_.end())
            return it->second;
        std::set<int> seen;
        for (const auto& q : qmoves(s, rule_, width_))
            seen.insert(grundy(step(s, q)));
        int g = 0;
        while (seen.count(g))
            ++g;
        memo_[s] = g;
        return g;
    }

private:
    Rule rule_;
    int width_;
    std::map<State, int> memo_;
};

} // namespace oracle

#pragma once

// The `qcg` command line: solve, table, legal, examples, verify, serve.
// Exit status: 0 success, 1 domain error (illegal move, failed check),
// 2 usage error (bad flags or unparseable position / move text).

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "qcg/example_suite.hpp"
#include "qcg/service.hpp"

namespace qcg::cli {

struct CliConfig
{
    std::string game;
    std::string ruleset = "A";
    std::string width = "2";
    std::string format = "text";
    std::string player = "LEFT";
    int imax = 5;
    int jmax = 5;
    std::string history_file;
    int port = 0;
    std::string journal_dir;
    std::string static_dir;
};

namespace detail {

class DomainError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline int solve(const CliConfig& c, std::ostream& out)
{
    const QuantumPosition start = parse_quantum_position(c.game);
    const Ruleset rules = parse_ruleset(c.ruleset, c.width);
    Solver solver(start.game(), rules);
    const Outcome o = solver.outcome(start);
    std::optional<int> g;
    if (start.game().impartial())
        g = solver.grundy(start);
    if (c.format == "json") {
        nlohmann::json j = {{"position", to_string(start)}, {"ruleset", rules.name()}, {"width", rules.width_text()},
                            {"outcome", to_string(o)}, {"grundy", g ? nlohmann::json(*g) : nlohmann::json()}};
        out << j.dump() << '\n';
    } else {
        if (g)
            out << "grundy=" << *g << ' ';
        out << "outcome=" << to_string(o) << '\n';
    }
    return 0;
}

inline int table(const CliConfig& c, std::ostream& out)
{
    const Ruleset rules = parse_ruleset(c.ruleset, c.width);
    if (rules.is_classical())
        throw UsageError("table needs a quantum ruleset");
    const ValueTable t = value_table(c.imax, c.jmax, rules.kind(), rules.width());
    if (c.format == "json")
        out << t.to_json().dump() << '\n';
    else
        out << t.to_csv();
    return 0;
}

inline int legal(const CliConfig& c, std::ostream& out)
{
    const QuantumPosition start = parse_quantum_position(c.game);
    const Ruleset rules = parse_ruleset(c.ruleset, c.width);
    const Player who = parse_player(c.player);
    const auto classical = available_classical_moves(start, who);
    const auto qmoves = enumerate_qmoves(start, who, rules);
    if (c.format == "json") {
        nlohmann::json cm = nlohmann::json::array();
        for (const auto& m : classical)
            cm.push_back(to_string(m));
        nlohmann::json qm = nlohmann::json::array();
        for (const auto& q : qmoves)
            qm.push_back(to_string(q));
        out << nlohmann::json{{"position", to_string(start)}, {"player", to_string(who)},
                              {"classical_moves", cm}, {"qmoves", qm}}
                   .dump()
            << '\n';
    } else {
        for (const auto& q : qmoves)
            out << to_string(q) << '\n';
    }
    return 0;
}

inline int examples(const CliConfig& c, std::ostream& out)
{
    const auto results = run_example_suite();
    bool all_ok = true;
    if (c.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : results) {
            nlohmann::json cells = nlohmann::json::array();
            for (const auto& cell : r.cells)
                cells.push_back({{"ruleset", cell.ruleset}, {"computed", cell.computed},
                                 {"expected", cell.expected ? nlohmann::json(*cell.expected) : nlohmann::json()}});
            rows.push_back({{"example", r.name}, {"position", r.position}, {"pass", r.ok()}, {"cells", cells},
                            {"failures", r.failures}});
            all_ok = all_ok && r.ok();
        }
        out << rows.dump() << '\n';
        return all_ok ? 0 : 1;
    }
    for (const auto& r : results) {
        out << (r.ok() ? "PASS  " : "FAIL  ") << std::left << std::setw(32) << r.name;
        for (const auto& cell : r.cells) {
            out << ' ' << cell.ruleset << '=' << cell.computed;
            if (!cell.expected)
                out << '?';
            else if (!cell.ok())
                out << "(want " << *cell.expected << ')';
        }
        out << '\n';
        for (const auto& f : r.failures)
            out << "      " << r.name << ": " << f << '\n';
        all_ok = all_ok && r.ok();
    }
    return all_ok ? 0 : 1;
}

/// History file: {"initial": "...", "ruleset": "A", "width": 2, "first": "LEFT",
///                "moves": ["[...]", ...], "challenge": "[...]"}
inline int verify(const CliConfig& c, std::ostream& out)
{
    std::ifstream in(c.history_file);
    if (!in)
        throw UsageError("cannot read history file " + c.history_file);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed history file", e.what());
    }
    if (!doc.is_object() || !doc.contains("initial") || !doc.contains("moves") || !doc["moves"].is_array())
        throw ParseError("history file needs 'initial' and 'moves'", c.history_file);

    const Position initial = parse_position(doc["initial"].get<std::string>());
    const std::string kind = doc.value("ruleset", c.ruleset);
    std::string width = c.width;
    if (doc.contains("width"))
        width = doc["width"].is_number_integer() ? std::to_string(doc["width"].get<int>())
                                                 : doc["width"].get<std::string>();
    const Ruleset rules = parse_ruleset(kind, width);
    const Player first = parse_player(doc.value("first", std::string("LEFT")));

    History h(Game::of(initial), initial, rules, first);
    nlohmann::json report = {{"initial", to_string(initial)}, {"ruleset", rules.name()}, {"width", rules.width_text()}};
    for (std::size_t i = 0; i < doc["moves"].size(); ++i) {
        const QMove q = parse_qmove(doc["moves"][i].get<std::string>(), h.game(), h.to_move());
        if (auto rejection = check_qmove(h.game(), h.current(), q, rules)) {
            report["illegal_entry"] = {{"index", i},
                                       {"move", to_string(q)},
                                       {"reason", to_string(rejection->reason)},
                                       {"offending_branch", rejection->offending_branch
                                                                ? nlohmann::json(to_string(*rejection->offending_branch))
                                                                : nlohmann::json()}};
            out << report.dump() << '\n';
            return 1;
        }
        h = h.append(q);
    }
    const QuantumPosition reals = replay_history(h);
    report["realisations"] = to_string(reals);
    report["consistent"] = reals == h.current();
    report["valid_runs"] = valid_runs(h).size();
    int status = reals == h.current() ? 0 : 1;
    if (doc.contains("challenge")) {
        const QMove q = parse_qmove(doc["challenge"].get<std::string>(), h.game(), h.to_move());
        const ChallengeVerdict v = exhibit_runs(h, q);
        report["challenge"] = v.to_json();
        report["winner"] = to_string(v.upheld ? q.owner() : opponent(q.owner()));
    }
    out << report.dump() << '\n';
    return status;
}

inline int serve(const CliConfig& c, std::ostream& out)
{
    int port = c.port;
    if (port == 0)
        port = std::getenv("PORT") ? std::atoi(std::getenv("PORT")) : 8080;
    std::string journal = c.journal_dir;
    if (journal.empty() && std::getenv("JOURNAL_DIR"))
        journal = std::getenv("JOURNAL_DIR");

    SessionStore store(journal.empty() ? std::nullopt : std::optional<std::filesystem::path>(journal));
    const auto recovered = store.recover();
    httplib::Server server;
    install_routes(server, store);
    if (!c.static_dir.empty() && !server.set_mount_point("/", c.static_dir))
        throw UsageError("static directory not found: " + c.static_dir);
    out << "listening on port " << port << " (" << recovered << " sessions recovered)" << std::endl;
    if (!server.listen("0.0.0.0", port))
        throw DomainError("cannot listen on port " + std::to_string(port));
    return 0;
}

} // namespace detail

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Quantum combinatorial games: solver, tables, referee and play service", "qcg"};
    app.require_subcommand(1);
    CliConfig c;

    auto add_ruleset = [&c](CLI::App* sub) {
        sub->add_option("--ruleset", c.ruleset, "classical, A, B, C, Cp or D")
            ->check(CLI::IsMember({"classical", "A", "B", "C", "Cp", "D"}));
        sub->add_option("--width", c.width, "maximum superposition size: integer or max");
    };

    auto* solve = app.add_subcommand("solve", "outcome, and Grundy value for impartial games");
    solve->add_option("--game", c.game, "position, e.g. nim:3,2 or {nim:1 | nim:2}")->required();
    add_ruleset(solve);
    solve->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));

    auto* table = app.add_subcommand("table", "Grundy values of <Nim(i,j)> for a ruleset");
    add_ruleset(table);
    table->add_option("--imax", c.imax)->check(CLI::NonNegativeNumber);
    table->add_option("--jmax", c.jmax)->check(CLI::NonNegativeNumber);
    table->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json", "text"}));

    auto* legal = app.add_subcommand("legal", "list legal q-moves");
    legal->add_option("--game", c.game)->required();
    add_ruleset(legal);
    legal->add_option("--player", c.player);
    legal->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));

    auto* examples = app.add_subcommand("examples", "ruleset-separating examples, pass/fail matrix");
    examples->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));

    auto* verify = app.add_subcommand("verify", "replay a history file and adjudicate a challenge");
    verify->add_option("--history", c.history_file)->required();
    add_ruleset(verify);

    auto* serve = app.add_subcommand("serve", "start the play service");
    serve->add_option("--port", c.port);
    serve->add_option("--journal", c.journal_dir);
    serve->add_option("--static", c.static_dir, "directory of UI assets to serve");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve)
            return detail::solve(c, out);
        if (*table)
            return detail::table(c, out);
        if (*legal)
            return detail::legal(c, out);
        if (*examples)
            return detail::examples(c, out);
        if (*verify)
            return detail::verify(c, out);
        if (*serve)
            return detail::serve(c, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IllegalMove& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

inline int run_command(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    return run_command(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace qcg::cli

#pragma once

// Live-play sessions behind the HTTP service. Every operation takes and
// returns JSON so the transport layer stays thin; errors are ServiceError
// carrying an HTTP status and a stable error code.
//
// Validation modes:
//   strict  every announced q-move is checked at once; illegal ones are
//           rejected with the engine's reason code. The last accepted move
//           may still be challenged by the player to move.
//   honor   an announced q-move stays pending until the opponent either
//           challenges it or accepts it (explicitly, or by announcing a
//           move of their own). Accepting an illegal announcement ends the
//           game in the acceptor's favour.

#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "qcg/referee.hpp"
#include "qcg/solver.hpp"

namespace qcg {

class ServiceError : public std::runtime_error
{
public:
    ServiceError(int status, std::string code, const std::string& message, nlohmann::json extra = nlohmann::json::object())
        : std::runtime_error(message), status_(status), code_(std::move(code)), extra_(std::move(extra))
    {}

    int status() const noexcept { return status_; }
    const std::string& code() const noexcept { return code_; }

    nlohmann::json body() const
    {
        nlohmann::json b = extra_;
        b["error"] = code_;
        b["message"] = what();
        return b;
    }

private:
    int status_;
    std::string code_;
    nlohmann::json extra_;
};

enum class Validation : std::uint8_t { Strict, Honor };

struct Announcement
{
    QMove move;
};

struct Session
{
    std::string id;
    std::string game_text;
    History history;
    Validation validation = Validation::Strict;
    std::optional<Player> engine_side;
    std::optional<Announcement> pending;
    std::optional<Player> winner;
    std::optional<ChallengeVerdict> verdict;
    std::optional<QMove> last_engine_move;

    bool finished() const noexcept { return winner.has_value(); }

    Player to_move() const noexcept
    {
        return pending ? opponent(pending->move.owner()) : history.to_move();
    }

    std::string status() const
    {
        if (finished())
            return "FINISHED";
        return to_move() == Player::Left ? "AWAITING_LEFT" : "AWAITING_RIGHT";
    }

    nlohmann::json to_json() const
    {
        nlohmann::json moves = nlohmann::json::array();
        for (const auto& q : history.entries())
            moves.push_back({{"player", to_string(q.owner())}, {"move", to_string(q)}});
        nlohmann::json reals = nlohmann::json::array();
        for (const auto& r : history.current().realisations())
            reals.push_back(to_string(r));
        nlohmann::json j = {
            {"id", id},
            {"game", game_text},
            {"ruleset", history.rules().name()},
            {"width", history.rules().width_text()},
            {"validation", validation == Validation::Strict ? "strict" : "honor"},
            {"opponents", engine_side ? "human-vs-engine" : "human-vs-human"},
            {"engine_side", engine_side ? nlohmann::json(to_string(*engine_side)) : nlohmann::json()},
            {"first", to_string(history.first())},
            {"status", status()},
            {"to_move", to_string(to_move())},
            {"winner", winner ? nlohmann::json(to_string(*winner)) : nlohmann::json()},
            {"history", moves},
            {"realisations", reals},
            {"position", to_string(history.current())},
            {"pending", pending ? nlohmann::json{{"player", to_string(pending->move.owner())},
                                                 {"move", to_string(pending->move)}}
                                : nlohmann::json()},
            {"verdict", verdict ? verdict->to_json() : nlohmann::json()},
        };
        if (last_engine_move)
            j["engine_move"] = to_string(*last_engine_move);
        return j;
    }
};

class SessionStore
{
public:
    /// Sessions journal to `journal_dir/<id>.jsonl` when a directory is given.
    explicit SessionStore(std::optional<std::filesystem::path> journal_dir = std::nullopt)
        : journal_dir_(std::move(journal_dir)), table_(std::make_shared<TranspositionTable>()),
          rng_(std::random_device{}())
    {
        if (journal_dir_)
            std::filesystem::create_directories(*journal_dir_);
    }

    /// Body: {game, ruleset, width?, opponents?, engine_side?, validation?, first?}
    nlohmann::json create(const nlohmann::json& body)
    {
        auto session = std::make_shared<Entry>();
        session->state = build(body, new_id());
        {
            std::lock_guard lock(session->mutex);
            journal(session->state.id, {{"event", "create"}, {"config", normalized_config(session->state)}});
            settle(session->state, false);
        }
        std::unique_lock lock(map_mutex_);
        sessions_.emplace(session->state.id, session);
        return session->state.to_json();
    }

    nlohmann::json get(const std::string& id) const
    {
        auto entry = find(id);
        std::lock_guard lock(entry->mutex);
        return entry->state.to_json();
    }

    /// Body: {move: "[...]", player?} or {accept: true} (honor mode).
    nlohmann::json submit(const std::string& id, const nlohmann::json& body)
    {
        auto entry = find(id);
        std::lock_guard lock(entry->mutex);
        Session& s = entry->state;
        if (body.contains("accept") && body["accept"].is_boolean() && body["accept"].get<bool>()) {
            accept_pending(s, false);
            return s.to_json();
        }
        const std::string text = string_field(body, "move");
        if (s.finished())
            throw ServiceError(409, "GAME_FINISHED", "the game is over");
        const Player mover = s.to_move();
        if (body.contains("player") && parse_player_field(body["player"]) != mover)
            throw ServiceError(409, "NOT_YOUR_TURN", std::string(to_string(mover)) + " is to move");
        if (s.engine_side && *s.engine_side == mover)
            throw ServiceError(409, "NOT_YOUR_TURN", "the engine is to move");

        const QMove q = parse(text, s.history.game(), mover);
        play(s, q, false);
        return s.to_json();
    }

    nlohmann::json challenge(const std::string& id)
    {
        auto entry = find(id);
        std::lock_guard lock(entry->mutex);
        do_challenge(entry->state, false);
        return entry->state.to_json();
    }

    nlohmann::json hint(const std::string& id) const
    {
        auto entry = find(id);
        std::lock_guard lock(entry->mutex);
        const Session& s = entry->state;
        require_no_pending(s);
        nlohmann::json j = {{"player", to_string(s.to_move())}, {"move", nullptr}};
        if (s.finished())
            return j;
        Solver solver(s.history.game(), s.history.rules(), table_);
        if (auto q = solver.best_move(s.history.current(), s.to_move())) {
            j["move"] = to_string(*q);
            j["winning"] = !solver.wins(*transition(s.history.game(), s.history.current(), *q), opponent(s.to_move()));
        }
        return j;
    }

    nlohmann::json legal_moves(const std::string& id) const
    {
        auto entry = find(id);
        std::lock_guard lock(entry->mutex);
        const Session& s = entry->state;
        require_no_pending(s);
        const Player who = s.to_move();
        nlohmann::json classical = nlohmann::json::array();
        nlohmann::json qmoves = nlohmann::json::array();
        bool truncated = false;
        if (!s.finished()) {
            const auto& game = s.history.game();
            const auto& pos = s.history.current();
            for (const auto& m : available_classical_moves(game, pos, who))
                classical.push_back(to_string(m));
            // Enumeration is exponential in the number of classical moves.
            if (classical.size() <= 16 || s.history.rules().width() <= 3) {
                for (const auto& q : enumerate_qmoves(game, pos, who, s.history.rules())) {
                    if (qmoves.size() == kMaxListedQMoves) {
                        truncated = true;
                        break;
                    }
                    qmoves.push_back(to_string(q));
                }
            } else {
                truncated = true;
            }
        }
        return {{"player", to_string(who)}, {"classical_moves", classical}, {"qmoves", qmoves}, {"truncated", truncated}};
    }

    /// Rebuilds sessions from the journal directory. Returns how many were loaded.
    std::size_t recover()
    {
        if (!journal_dir_)
            return 0;
        std::size_t loaded = 0;
        for (const auto& file : std::filesystem::directory_iterator(*journal_dir_)) {
            if (file.path().extension() != ".jsonl")
                continue;
            std::ifstream in(file.path());
            std::string line;
            auto entry = std::make_shared<Entry>();
            bool created = false;
            while (std::getline(in, line)) {
                if (line.empty())
                    continue;
                const auto ev = nlohmann::json::parse(line);
                const auto kind = ev.at("event").get<std::string>();
                Session& s = entry->state;
                if (kind == "create") {
                    s = build(ev.at("config"), file.path().stem().string());
                    settle(s, true);
                    created = true;
                } else if (!created) {
                    break;
                } else if (kind == "move") {
                    play(s, parse(ev.at("move").get<std::string>(), s.history.game(), parse_player_field(ev.at("player"))), true);
                } else if (kind == "accept") {
                    accept_pending(s, true);
                } else if (kind == "challenge") {
                    do_challenge(s, true);
                }
            }
            if (created) {
                std::unique_lock lock(map_mutex_);
                sessions_[entry->state.id] = entry;
                ++loaded;
            }
        }
        return loaded;
    }

    std::size_t size() const
    {
        std::shared_lock lock(map_mutex_);
        return sessions_.size();
    }

private:
    static constexpr std::size_t kMaxListedQMoves = 4096;

    struct Entry
    {
        mutable std::mutex mutex;
        Session state{"", "", History(Game::nim(), nim_position({}), Ruleset::classical())};
    };

    std::shared_ptr<Entry> find(const std::string& id) const
    {
        std::shared_lock lock(map_mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end())
            throw ServiceError(404, "NO_SUCH_SESSION", "unknown session " + id);
        return it->second;
    }

    std::string new_id()
    {
        std::lock_guard lock(rng_mutex_);
        static constexpr char digits[] = "0123456789abcdef";
        std::string id(16, '0');
        for (auto& c : id)
            c = digits[rng_() % 16];
        return id;
    }

    static std::string string_field(const nlohmann::json& body, const char* name)
    {
        if (!body.is_object() || !body.contains(name) || !body[name].is_string())
            throw ServiceError(400, "BAD_REQUEST", std::string("missing string field '") + name + "'");
        return body[name].get<std::string>();
    }

    static Player parse_player_field(const nlohmann::json& v)
    {
        if (!v.is_string())
            throw ServiceError(400, "BAD_REQUEST", "player must be a string");
        try {
            return parse_player(v.get<std::string>());
        } catch (const ParseError& e) {
            throw ServiceError(400, "PARSE_ERROR", e.what(), {{"token", e.token()}});
        }
    }

    static QMove parse(const std::string& text, const Game& game, Player mover)
    {
        try {
            return parse_qmove(text, game, mover);
        } catch (const ParseError& e) {
            throw ServiceError(400, "PARSE_ERROR", e.what(), {{"token", e.token()}});
        }
    }

    static Session build(const nlohmann::json& body, std::string id)
    {
        if (!body.is_object())
            throw ServiceError(400, "BAD_REQUEST", "expected a JSON object");
        try {
            const std::string text = string_field(body, "game");
            const Position initial = parse_position(text);
            const std::string kind = string_field(body, "ruleset");
            std::string width = "2";
            if (body.contains("width"))
                width = body["width"].is_number_integer() ? std::to_string(body["width"].get<int>())
                                                          : body["width"].get<std::string>();
            const Ruleset rules = parse_ruleset(kind, width);

            std::optional<Player> engine;
            const std::string opponents = body.value("opponents", std::string("human-vs-human"));
            if (opponents == "human-vs-engine")
                engine = body.contains("engine_side") ? parse_player_field(body["engine_side"]) : Player::Right;
            else if (opponents != "human-vs-human")
                throw ServiceError(400, "BAD_REQUEST", "opponents must be human-vs-human or human-vs-engine");

            Validation validation = engine ? Validation::Strict : Validation::Honor;
            if (body.contains("validation")) {
                const auto v = body["validation"].get<std::string>();
                if (v == "strict")
                    validation = Validation::Strict;
                else if (v == "honor")
                    validation = Validation::Honor;
                else
                    throw ServiceError(400, "BAD_REQUEST", "validation must be strict or honor");
            }
            if (engine && validation == Validation::Honor)
                throw ServiceError(400, "BAD_REQUEST", "engine games use strict validation");

            const Player first = body.contains("first") ? parse_player_field(body["first"]) : Player::Left;
            Game game = Game::of(initial);
            return Session{std::move(id), to_string(initial), History(std::move(game), initial, rules, first),
                           validation, engine, {}, {}, {}, {}};
        } catch (const ParseError& e) {
            throw ServiceError(400, "PARSE_ERROR", e.what(), {{"token", e.token()}});
        } catch (const UsageError& e) {
            throw ServiceError(400, "BAD_REQUEST", e.what());
        } catch (const nlohmann::json::exception& e) {
            throw ServiceError(400, "BAD_REQUEST", e.what());
        }
    }

    static nlohmann::json normalized_config(const Session& s)
    {
        return {
            {"game", s.game_text},
            {"ruleset", s.history.rules().name()},
            {"width", s.history.rules().width_text()},
            {"opponents", s.engine_side ? "human-vs-engine" : "human-vs-human"},
            {"engine_side", s.engine_side ? std::string(to_string(*s.engine_side)) : std::string("RIGHT")},
            {"validation", s.validation == Validation::Strict ? "strict" : "honor"},
            {"first", to_string(s.history.first())},
        };
    }

    void journal(const std::string& id, const nlohmann::json& event) const
    {
        if (!journal_dir_)
            return;
        std::ofstream out(*journal_dir_ / (id + ".jsonl"), std::ios::app);
        out << event.dump() << '\n';
    }

    // Ends the game when the player to move has no legal q-move, else lets
    // the engine reply when it is its turn.
    void settle(Session& s, bool replaying)
    {
        while (!s.finished() && !s.pending) {
            const Player mover = s.history.to_move();
            Solver solver(s.history.game(), s.history.rules(), table_);
            if (enumerate_qmoves(s.history.game(), s.history.current(), mover, s.history.rules()).empty()) {
                s.winner = opponent(mover);
                return;
            }
            if (replaying || !s.engine_side || *s.engine_side != mover)
                return;
            auto q = solver.best_move(s.history.current(), mover);
            journal(s.id, {{"event", "move"}, {"player", to_string(mover)}, {"move", to_string(*q)}});
            s.history = s.history.append(*q);
            s.last_engine_move = std::move(q);
        }
    }

    void play(Session& s, const QMove& q, bool replaying)
    {
        if (s.validation == Validation::Honor) {
            if (s.pending) {
                accept_pending(s, replaying);
                if (s.finished())
                    throw ServiceError(409, "GAME_FINISHED", "accepting the pending announcement ended the game",
                                       {{"session", s.to_json()}});
            }
            if (!replaying)
                journal(s.id, {{"event", "move"}, {"player", to_string(q.owner())}, {"move", to_string(q)}});
            s.pending = Announcement{q};
            return;
        }
        if (auto rejection = check_qmove(s.history.game(), s.history.current(), q, s.history.rules())) {
            nlohmann::json extra = {{"reason", to_string(rejection->reason)}, {"offending_branch", nullptr}};
            if (rejection->offending_branch)
                extra["offending_branch"] = to_string(*rejection->offending_branch);
            throw ServiceError(422, "ILLEGAL_MOVE", "illegal q-move " + to_string(q), extra);
        }
        if (!replaying)
            journal(s.id, {{"event", "move"}, {"player", to_string(q.owner())}, {"move", to_string(q)}});
        s.history = s.history.append(q);
        s.verdict.reset();
        s.last_engine_move.reset();
        if (s.engine_side && *s.engine_side == q.owner())
            s.last_engine_move = q;  // engine replies come back through here on recovery
        settle(s, replaying);
    }

    void accept_pending(Session& s, bool replaying)
    {
        if (s.finished())
            throw ServiceError(409, "GAME_FINISHED", "the game is over");
        if (!s.pending)
            throw ServiceError(409, "NOTHING_TO_ACCEPT", "no announced move is pending");
        if (!replaying)
            journal(s.id, {{"event", "accept"}});
        const QMove q = s.pending->move;
        s.pending.reset();
        if (!is_legal_qmove(s.history.game(), s.history.current(), q, s.history.rules())) {
            s.winner = opponent(q.owner());
            return;
        }
        s.history = s.history.append(q);
        settle(s, replaying);
    }

    void do_challenge(Session& s, bool replaying)
    {
        if (s.finished())
            throw ServiceError(409, "GAME_FINISHED", "the game is over");
        if (s.pending) {
            const QMove q = s.pending->move;
            if (!replaying)
                journal(s.id, {{"event", "challenge"}});
            s.pending.reset();
            s.verdict = exhibit_runs(s.history, q);
            s.winner = s.verdict->upheld ? q.owner() : opponent(q.owner());
            if (s.verdict->upheld)
                s.history = s.history.append(q);
            return;
        }
        if (s.validation == Validation::Strict && s.history.size() > 0) {
            const QMove& last = s.history.entries().back();
            if (!replaying)
                journal(s.id, {{"event", "challenge"}});
            s.verdict = exhibit_runs(s.history.without_last(), last);
            s.winner = s.verdict->upheld ? last.owner() : opponent(last.owner());
            return;
        }
        throw ServiceError(409, "NOTHING_TO_CHALLENGE", "no announced move to challenge");
    }

    static void require_no_pending(const Session& s)
    {
        if (s.pending && !s.finished())
            throw ServiceError(409, "PENDING_ANNOUNCEMENT", "accept or challenge the pending announcement first");
    }

    std::optional<std::filesystem::path> journal_dir_;
    std::shared_ptr<TranspositionTable> table_;
    mutable std::shared_mutex map_mutex_;
    std::unordered_map<std::string, std::shared_ptr<Entry>> sessions_;
    std::mutex rng_mutex_;
    std::mt19937_64 rng_;
};

} // namespace qcg

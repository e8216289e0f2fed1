#pragma once

// HTTP routes for the play service.
//
//   POST /sessions                      create
//   GET  /sessions/{id}                 state
//   POST /sessions/{id}/moves           announce (or accept) a q-move
//   POST /sessions/{id}/challenge       challenge the announced move
//   GET  /sessions/{id}/hint            engine suggestion for the mover
//   GET  /sessions/{id}/legal-moves     classical and q-moves for the mover

#include <functional>

#include "httplib.h"
#include "qcg/session.hpp"

namespace qcg {

namespace detail {

inline void reply(httplib::Response& res, int status, const nlohmann::json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

inline void guarded(httplib::Response& res, const std::function<nlohmann::json()>& handler, int ok_status = 200)
{
    try {
        reply(res, ok_status, handler());
    } catch (const ServiceError& e) {
        reply(res, e.status(), e.body());
    } catch (const nlohmann::json::exception& e) {
        reply(res, 400, {{"error", "BAD_REQUEST"}, {"message", e.what()}});
    } catch (const std::exception& e) {
        reply(res, 500, {{"error", "INTERNAL"}, {"message", e.what()}});
    }
}

inline nlohmann::json body_of(const httplib::Request& req)
{
    if (req.body.empty())
        return nlohmann::json::object();
    return nlohmann::json::parse(req.body);
}

} // namespace detail

inline void install_routes(httplib::Server& server, SessionStore& store)
{
    using detail::guarded;
    server.Post("/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return store.create(detail::body_of(req)); }, 201);
    });
    server.Get(R"(/sessions/([0-9a-f]+))", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return store.get(req.matches[1]); });
    });
    server.Post(R"(/sessions/([0-9a-f]+)/moves)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return store.submit(req.matches[1], detail::body_of(req)); });
    });
    server.Post(R"(/sessions/([0-9a-f]+)/challenge)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return store.challenge(req.matches[1]); });
    });
    server.Get(R"(/sessions/([0-9a-f]+)/hint)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return store.hint(req.matches[1]); });
    });
    server.Get(R"(/sessions/([0-9a-f]+)/legal-moves)", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return store.legal_moves(req.matches[1]); });
    });
}

} // namespace qcg

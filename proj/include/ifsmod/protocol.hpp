#pragma once

// JSON message protocol over a ModelingSession, shared by the in-process binding, the
// `ifsmod session` line mode and the local HTTP service.
//
// Every request is an object with "type" in {init, move, hit, frame}; an optional "id"
// is echoed back. Replies carry "type", "ok" and either the payload or
// {"error": <kind>, "message": <text>}. Coordinates are world units; bases are flat
// arrays [ax, ay, bx, by, cx, cy]; frame points are a flat array of 32-bit floats
// [x0, y0, x1, y1, ...].
//
//   init   {"ifs": <IFS text> | "dataset": "flower"|"maple"|"sierpinski",
//           "points"?, "burn_in"?, "seed"?, "basis"?: "auto" | [6 numbers],
//           "viewport"?: {"width", "height", "margin"?}}
//   move   {"vertex": "A"|"B"|"C", "x", "y"}
//   hit    {"x", "y", "radius"}
//   frame  {"points"?: bool (default true)}

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ifsmod/barycentric.hpp"
#include "ifsmod/codec.hpp"
#include "ifsmod/datasets.hpp"
#include "ifsmod/error.hpp"
#include "ifsmod/render.hpp"
#include "ifsmod/session.hpp"

namespace ifsmod::protocol {

using nlohmann::json;

inline json basis_to_json(const AffineBasis& b) {
    return json::array({b.a.x, b.a.y, b.b.x, b.b.y, b.c.x, b.c.y});
}

inline AffineBasis basis_from_json(const json& j) {
    if (!j.is_array() || j.size() != 6) throw InvalidArgument("basis must be an array of 6 numbers");
    double v[6];
    for (std::size_t i = 0; i < 6; ++i) {
        if (!j[i].is_number()) throw InvalidArgument("basis entries must be numbers");
        v[i] = j[i].get<double>();
    }
    return {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}};
}

/// Flat float32 payload [x0, y0, x1, y1, ...].
inline json points_to_json(const PointSet& points) {
    json out = json::array();
    out.get_ref<json::array_t&>().reserve(points.size() * 2);
    for (const auto& p : points) {
        out.push_back(static_cast<float>(p.x));
        out.push_back(static_cast<float>(p.y));
    }
    return out;
}

class SessionEndpoint {
public:
    /// Handles one request; never throws for malformed input, errors become replies.
    json handle(const json& request) {
        json reply = json::object();
        if (request.is_object() && request.contains("id")) reply["id"] = request["id"];
        const std::string type =
            request.is_object() && request.contains("type") && request["type"].is_string()
                ? request["type"].get<std::string>()
                : std::string{};
        reply["type"] = type;
        try {
            if (type == "init") init(request, reply);
            else if (type == "move") move(request, reply);
            else if (type == "hit") hit(request, reply);
            else if (type == "frame") frame(request, reply);
            else throw InvalidArgument("unknown message type '" + type + "'");
            reply["ok"] = true;
        } catch (const DegenerateBasis& e) {
            fail(reply, "DegenerateBasis", e.what());
            reply["determinant"] = e.determinant();
            if (session_) reply["basis"] = basis_to_json(session_->current_basis());
        } catch (const ParseError& e) {
            fail(reply, to_string(e.kind()), e.what());
            if (e.line() != 0) reply["line"] = e.line();
        } catch (const json::exception& e) {
            fail(reply, "InvalidArgument", e.what());
        } catch (const InvalidArgument& e) {
            fail(reply, "InvalidArgument", e.what());
        } catch (const Error& e) {
            fail(reply, "Error", e.what());
        }
        return reply;
    }

    /// Line mode: one JSON document in, one compact JSON document out.
    std::string handle_text(std::string_view text) {
        json request;
        try {
            request = json::parse(text);
        } catch (const json::parse_error& e) {
            json reply{{"type", ""}};
            fail(reply, "MalformedJson", e.what());
            return reply.dump();
        }
        return handle(request).dump();
    }

    const ModelingSession* session() const { return session_.get(); }

private:
    static void fail(json& reply, std::string_view kind, std::string_view message) {
        reply["ok"] = false;
        reply["error"] = kind;
        reply["message"] = message;
    }

    ModelingSession& require_session() {
        if (!session_) throw InvalidArgument("no session: send an init message first");
        return *session_;
    }

    static double number(const json& req, const char* key) {
        if (!req.contains(key) || !req[key].is_number())
            throw InvalidArgument(std::string("'") + key + "' must be a number");
        return req[key].get<double>();
    }

    void init(const json& req, json& reply) {
        IfsDocument doc;
        if (req.contains("ifs")) {
            doc = parse_ifs(req.at("ifs").get<std::string>());
        } else if (req.contains("dataset")) {
            const auto name = req.at("dataset").get<std::string>();
            const auto text = datasets::find(name);
            if (!text) throw InvalidArgument("unknown dataset '" + name + "'");
            doc = parse_ifs(*text);
        } else {
            throw InvalidArgument("init needs 'ifs' text or a 'dataset' name");
        }

        ChaosParams params = doc.chaos_params();
        if (req.contains("points")) params.n_points = req.at("points").get<std::size_t>();
        if (req.contains("burn_in")) params.burn_in = req.at("burn_in").get<std::size_t>();
        if (req.contains("seed")) params.seed = req.at("seed").get<std::uint64_t>();

        BasisMode mode = MinimalSimplex{};
        if (req.contains("basis") && !(req["basis"].is_string() && req["basis"] == "auto")) {
            mode = UserTriangle{basis_from_json(req["basis"])};
        } else if (!req.contains("basis") && doc.basis) {
            mode = UserTriangle{*doc.basis};
        }

        auto next = std::make_unique<ModelingSession>(doc.system(), params, mode);
        const Frame f = next->frame();
        reply["basis"] = basis_to_json(f.basis);
        reply["determinant"] = f.telemetry.determinant;
        reply["point_count"] = f.telemetry.point_count;
        reply["contractivity"] = next->contractivity();
        reply["contractive"] = next->contractivity() < 1.0;
        if (req.contains("viewport")) {
            const json& v = req["viewport"];
            const Viewport vp = default_viewport(*f.points, f.basis, v.at("width").get<int>(),
                                                 v.at("height").get<int>(), v.value("margin", 0.0));
            const Box2& box = vp.world_box();
            reply["world_box"] = json::array({box.xmin, box.ymin, box.xmax, box.ymax});
        }
        session_ = std::move(next);
    }

    void move(const json& req, json& reply) {
        ModelingSession& s = require_session();
        const auto vertex = parse_vertex(req.at("vertex").get<std::string>());
        if (!vertex) throw InvalidArgument("vertex must be A, B or C");
        const Frame f = s.move_vertex(*vertex, {number(req, "x"), number(req, "y")});
        reply["basis"] = basis_to_json(f.basis);
        reply["determinant"] = f.telemetry.determinant;
        reply["revision"] = f.telemetry.revision;
    }

    void hit(const json& req, json& reply) {
        const ModelingSession& s = require_session();
        const auto v = s.hit_test({number(req, "x"), number(req, "y")}, number(req, "radius"));
        reply["vertex"] = v ? json(std::string(to_string(*v))) : json(nullptr);
        reply["cursor"] = v ? "hand" : "cross";
    }

    void frame(const json& req, json& reply) {
        const Frame f = require_session().frame();
        reply["basis"] = basis_to_json(f.basis);
        reply["determinant"] = f.telemetry.determinant;
        reply["point_count"] = f.telemetry.point_count;
        reply["revision"] = f.telemetry.revision;
        reply["last_update_ns"] = f.telemetry.last_update.count();
        if (req.value("points", true)) reply["points"] = points_to_json(*f.points);
    }

    std::unique_ptr<ModelingSession> session_;
};

}  // namespace ifsmod::protocol

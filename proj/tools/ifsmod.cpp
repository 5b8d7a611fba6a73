// ifsmod: batch rendering, simplex/contractivity queries, the JSON session protocol over
// stdin/stdout or HTTP, and the edit-latency benchmark.
//
// Exit codes: 0 success, 1 input error, 2 render error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"

#include "ifsmod/bench.hpp"
#include "ifsmod/codec.hpp"
#include "ifsmod/datasets.hpp"
#include "ifsmod/ifsmod.hpp"
#include "ifsmod/protocol.hpp"
#include "ifsmod/render.hpp"

namespace {

using namespace ifsmod;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kRenderError = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RenderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string real(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double parse_number(std::string_view s, std::string_view what) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v))
        throw InputError("bad number '" + std::string(s) + "' in " + std::string(what));
    return v;
}

std::vector<double> parse_list(std::string_view s, std::string_view what) {
    std::vector<double> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(parse_number(s.substr(0, comma), what));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

struct Move {
    VertexId vertex;
    Point2 delta;
};

// "C:+0.5,+0.0" -> vertex C displaced by (0.5, 0).
Move parse_move(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) throw InputError("--move expects V:dx,dy, got '" + std::string(s) + "'");
    const auto v = parse_vertex(s.substr(0, colon));
    if (!v) throw InputError("--move vertex must be A, B or C, got '" + std::string(s.substr(0, colon)) + "'");
    const auto d = parse_list(s.substr(colon + 1), "--move");
    if (d.size() != 2) throw InputError("--move expects two displacement values");
    return {*v, {d[0], d[1]}};
}

AffineBasis parse_basis(std::string_view s) {
    const auto v = parse_list(s, "--basis");
    if (v.size() != 6) throw InputError("--basis expects 'auto' or six comma-separated numbers");
    return {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RenderError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw RenderError("failed writing '" + path + "'");
}

// Common IFS source + chaos-game options.
struct SourceOptions {
    std::string ifs_path;
    std::string dataset;
    std::size_t points = 100000;
    std::size_t burn_in = ChaosParams::kDefaultBurnIn;
    std::uint64_t seed = 0;
    CLI::Option* points_opt = nullptr;
    CLI::Option* burn_in_opt = nullptr;
    CLI::Option* seed_opt = nullptr;

    void attach(CLI::App& app) {
        auto* ifs = app.add_option("--ifs", ifs_path, "IFS code file");
        auto* ds = app.add_option("--dataset", dataset, "bundled IFS: flower, maple or sierpinski");
        ifs->excludes(ds);
        points_opt = app.add_option("--points", points, "number of plotted points (default 100000)")
                         ->check(CLI::PositiveNumber);
        burn_in_opt = app.add_option("--burn-in", burn_in, "orbit points discarded first (default 14)");
        seed_opt = app.add_option("--seed", seed, "chaos game seed (default 0)");
    }

    IfsDocument document() const {
        if (!ifs_path.empty()) return parse_ifs(read_file(ifs_path));
        if (!dataset.empty()) {
            const auto text = datasets::find(dataset);
            if (!text) throw InputError("unknown dataset '" + dataset + "'");
            return parse_ifs(*text);
        }
        throw InputError("one of --ifs or --dataset is required");
    }

    // Explicit flags win over the file's @render line, which wins over the defaults.
    ChaosParams params(const IfsDocument& doc) const {
        ChaosParams p = doc.chaos_params();
        if (points_opt->count()) p.n_points = points;
        if (burn_in_opt->count()) p.burn_in = burn_in;
        if (seed_opt->count()) p.seed = seed;
        return p;
    }
};

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const DegenerateBasis& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const RenderError& e) {
        err << "error: " << e.what() << '\n';
        return kRenderError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kRenderError;
    }
}

void print_points(std::ostream& out, const PointSet& points) {
    for (const auto& p : points) out << real(p.x) << ' ' << real(p.y) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interactive-style affine modeling of IFS attractors, batch edition"};
    app.require_subcommand(1);

    // render
    SourceOptions render_src;
    std::string basis_arg;
    std::vector<std::string> moves;
    std::string out_path;
    std::string format = "ppm";
    int width = 800;
    int height = 800;
    bool no_triangle = false;
    std::string points_out;
    auto* render = app.add_subcommand("render", "render the attractor, optionally after scripted vertex moves");
    render_src.attach(*render);
    render->add_option("--basis", basis_arg, "'auto' (minimal canonical simplex) or x1,y1,x2,y2,x3,y3");
    render->add_option("--move", moves, "V:dx,dy displacement of vertex V (repeatable, applied in order)")
        ->allow_extra_args(false);
    render->add_option("--out", out_path, "output image path")->required();
    render->add_option("--format", format, "ppm or svg")->check(CLI::IsMember({"ppm", "svg"}));
    render->add_option("--width", width, "image width in pixels (default 800)")->check(CLI::PositiveNumber);
    render->add_option("--height", height, "image height in pixels (default 800)")->check(CLI::PositiveNumber);
    render->add_flag("--no-triangle", no_triangle, "do not draw the control triangle");
    render->add_option("--points-out", points_out, "also write the final points, one 'x y' per line");

    // simplex
    SourceOptions simplex_src;
    auto* simplex = app.add_subcommand("simplex", "print the minimal canonical simplex of the attractor");
    simplex_src.attach(*simplex);

    // info
    SourceOptions info_src;
    auto* info = app.add_subcommand("info", "print the maps and their contractivity factors");
    info_src.attach(*info);

    // session
    auto* session = app.add_subcommand("session", "JSON session protocol: one request per stdin line");

    // serve
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
    auto* serve = app.add_subcommand("serve", "JSON session protocol over HTTP (POST /session)");
    serve->add_option("--host", host, "bind address (default 127.0.0.1)");
    serve->add_option("--port", port, "port (default 8080)");
    serve->add_option("--static", static_dir, "directory served at / (the browser frontend bundle)");

    // bench
    SourceOptions bench_src;
    std::size_t edits = 1000;
    auto* bench = app.add_subcommand("bench", "time move_vertex + frame snapshot");
    bench_src.attach(*bench);
    bench->add_option("--edits", edits, "number of timed edits (default 1000)")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInputError;
    }

    std::ostream& out = std::cout;
    std::ostream& err = std::cerr;

    if (*render) {
        return guarded(err, [&] {
            const IfsDocument doc = render_src.document();
            const ChaosParams params = render_src.params(doc);
            BasisMode mode = MinimalSimplex{};
            if (!basis_arg.empty() && basis_arg != "auto") mode = UserTriangle{parse_basis(basis_arg)};
            else if (basis_arg.empty() && doc.basis) mode = UserTriangle{*doc.basis};
            std::vector<Move> script;
            for (const auto& m : moves) script.push_back(parse_move(m));

            ModelingSession s(doc.system(), params, mode);
            const Viewport vp = default_viewport(s.base_points(), s.base_basis(), width, height);
            for (std::size_t i = 0; i < script.size(); ++i) {
                const Point2 from = s.current_basis()[static_cast<std::size_t>(script[i].vertex)];
                try {
                    s.move_vertex(script[i].vertex, from + script[i].delta);
                } catch (const DegenerateBasis& e) {
                    throw InputError("move " + std::to_string(i + 1) + " (" + moves[i] + ") rejected: " + e.what());
                }
            }
            const Frame f = s.frame();
            const std::optional<AffineBasis> overlay =
                no_triangle ? std::nullopt : std::optional<AffineBasis>(f.basis);
            write_file(out_path, format == "svg" ? encode_svg(*f.points, overlay, vp)
                                                 : encode_ppm(rasterize(*f.points, overlay, vp)));
            if (!points_out.empty()) {
                std::ostringstream text;
                print_points(text, *f.points);
                write_file(points_out, text.str());
            }
            if (s.contractivity() >= 1.0)
                err << "warning: IFS is not contractive (s = " << real(s.contractivity()) << ")\n";
            out << "wrote " << out_path << " (" << width << 'x' << height << ", " << f.points->size()
                << " points, " << script.size() << " moves)\n";
            return kOk;
        });
    }

    if (*simplex) {
        return guarded(err, [&] {
            const IfsDocument doc = simplex_src.document();
            const CanonicalSimplex cs = canonical_simplex(chaos_game(doc.system(), simplex_src.params(doc)));
            const AffineBasis b = cs.basis();
            out << "basis " << real(b.a.x) << ',' << real(b.a.y) << ',' << real(b.b.x) << ',' << real(b.b.y)
                << ',' << real(b.c.x) << ',' << real(b.c.y) << '\n'
                << "leg " << real(cs.leg) << "\narea " << real(cs.area()) << '\n';
            return kOk;
        });
    }

    if (*info) {
        return guarded(err, [&] {
            const IfsDocument doc = info_src.document();
            const IfsSystem ifs = doc.system();
            out << "name " << (doc.name.empty() ? "(unnamed)" : doc.name) << "\nmaps " << ifs.size() << '\n';
            for (std::size_t i = 0; i < ifs.size(); ++i) {
                const auto& m = ifs.maps()[i];
                out << "  w" << i + 1 << ": A=[[" << real(m.a11) << ", " << real(m.a12) << "], [" << real(m.a21)
                    << ", " << real(m.a22) << "]] b=(" << real(m.b1) << ", " << real(m.b2)
                    << ") s=" << real(map_contractivity(m)) << " det=" << real(m.determinant()) << '\n';
            }
            const double s = system_contractivity(ifs);
            out << "contractivity " << real(s) << (s < 1.0 ? " (contractive)" : " (NOT contractive)") << '\n';
            return kOk;
        });
    }

    if (*session) {
        protocol::SessionEndpoint endpoint;
        std::string line;
        while (std::getline(std::cin, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            out << endpoint.handle_text(line) << '\n' << std::flush;
        }
        return kOk;
    }

    if (*serve) {
        protocol::SessionEndpoint endpoint;
        std::mutex mutex;
        httplib::Server server;
        server.Post("/session", [&](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard lock(mutex);
            res.set_content(endpoint.handle_text(req.body), "application/json");
        });
        if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
            err << "error: cannot serve static directory '" << static_dir << "'\n";
            return kInputError;
        }
        out << "listening on http://" << host << ':' << port << '\n' << std::flush;
        if (!server.listen(host, port)) {
            err << "error: cannot listen on " << host << ':' << port << '\n';
            return kInputError;
        }
        return kOk;
    }

    if (*bench) {
        return guarded(err, [&] {
            const IfsDocument doc = bench_src.document();
            ModelingSession s(doc.system(), bench_src.params(doc), MinimalSimplex{});
            const LatencyStats st = measure_edit_latency(s, edits);
            out << "points " << s.base_points().size() << "\nedits " << st.samples << "\nmedian_ms "
                << st.median_ms << "\np99_ms " << st.p99_ms << "\nmax_ms " << st.max_ms << "\nhardware_threads "
                << std::thread::hardware_concurrency() << '\n'
                << "budget " << (st.median_ms < 16.0 && st.p99_ms < 33.0 ? "met" : "MISSED")
                << " (median < 16 ms, p99 < 33 ms)\n";
            return kOk;
        });
    }
    return kInputError;
}

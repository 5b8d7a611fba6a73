// Builds a maple session on its minimal canonical simplex, drags the top vertex sideways
// in a few steps (a "wind" shear) and writes one PPM per step.

#include <fstream>
#include <iostream>
#include <string>

#include "ifsmod/ifsmod.hpp"

int main() {
    using namespace ifsmod;

    const IfsDocument doc = parse_ifs(datasets::maple);
    ModelingSession session(doc.system(), ChaosParams{.n_points = 100000, .seed = 42}, MinimalSimplex{});
    const Viewport camera = default_viewport(session.base_points(), session.base_basis(), 400, 400);

    const Point2 top = session.base_basis().c;
    const double leg = session.base_basis().b.x - session.base_basis().a.x;
    for (int step = 0; step <= 4; ++step) {
        const Frame frame = session.move_vertex(VertexId::C, {top.x + 0.1 * leg * step, top.y});
        const std::string path = "maple_wind_" + std::to_string(step) + ".ppm";
        std::ofstream(path, std::ios::binary) << encode_ppm(rasterize(*frame.points, frame.basis, camera));
        std::cout << path << "  det T = " << frame.telemetry.determinant << '\n';
    }
}

#pragma once

// Bundled IFS codes. data/*.ifs hold the same text byte for byte.

#include <array>
#include <optional>
#include <string_view>

namespace ifsmod::datasets {

inline constexpr std::string_view flower = R"ifs(# Two similarities whose attractor is the "flower" fractal.
@name flower
0.47 0.30 -0.30 0.47 0.37 1.74
0.48 -0.29 0.29 0.48 -0.34 1.75
)ifs";

inline constexpr std::string_view maple = R"ifs(# Four maps whose attractor is the "maple" leaf.
@name maple
-0.04 0 -0.23 -0.65 -0.08 0.26
0.61 0 0 0.31 0.07 3.5
0.65 0.29 -0.3 0.48 0.74 0.39
0.64 -0.3 0.16 0.56 -0.56 0.60
)ifs";

inline constexpr std::string_view sierpinski = R"ifs(# Sierpinski triangle with vertices (0,0), (1,0), (0,1).
@name sierpinski
0.5 0 0 0.5 0 0
0.5 0 0 0.5 0.5 0
0.5 0 0 0.5 0 0.5
)ifs";

struct Named {
    std::string_view name;
    std::string_view text;
};

inline constexpr std::array<Named, 3> all{{{"flower", flower}, {"maple", maple}, {"sierpinski", sierpinski}}};

inline std::optional<std::string_view> find(std::string_view name) {
    for (const auto& [n, text] : all)
        if (n == name) return text;
    return std::nullopt;
}

}  // namespace ifsmod::datasets

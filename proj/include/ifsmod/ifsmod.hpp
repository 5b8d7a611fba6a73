#pragma once

// Umbrella header for the core library. The JSON protocol (ifsmod/protocol.hpp) needs
// nlohmann/json and is included separately.

#include "ifsmod/barycentric.hpp"
#include "ifsmod/bench.hpp"
#include "ifsmod/codec.hpp"
#include "ifsmod/datasets.hpp"
#include "ifsmod/error.hpp"
#include "ifsmod/geometry.hpp"
#include "ifsmod/ifs.hpp"
#include "ifsmod/render.hpp"
#include "ifsmod/rng.hpp"
#include "ifsmod/session.hpp"
#include "ifsmod/simplex.hpp"

#pragma once

#include "effgraph/deform.hpp"
#include "effgraph/effective.hpp"
#include "effgraph/error.hpp"
#include "effgraph/graph.hpp"
#include "effgraph/hodge.hpp"
#include "effgraph/imaging.hpp"
#include "effgraph/io.hpp"
#include "effgraph/linalg.hpp"
#include "effgraph/measures.hpp"
#include "effgraph/rgeg.hpp"
#include "effgraph/spectral.hpp"

namespace effgraph {

inline constexpr const char* kVersion = "0.1.0";

} // namespace effgraph

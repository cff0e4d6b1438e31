#pragma once

#include "polyvis/shapes.hpp"

namespace fixtures {
using namespace polyvis::shapes;
using polyvis::Point2;
using polyvis::PolygonWithHoles;
using polyvis::Ring;
}  // namespace fixtures

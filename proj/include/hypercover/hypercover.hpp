#pragma once

#include "hypercover/asymptotics.hpp"
#include "hypercover/core.hpp"
#include "hypercover/coverage.hpp"
#include "hypercover/csv.hpp"
#include "hypercover/designs.hpp"
#include "hypercover/experiments.hpp"
#include "hypercover/intervals.hpp"
#include "hypercover/parallel.hpp"
#include "hypercover/quantization.hpp"
#include "hypercover/rng.hpp"

namespace hypercover {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hypercover

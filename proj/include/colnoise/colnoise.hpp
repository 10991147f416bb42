#pragma once

#include "colnoise/error.hpp"
#include "colnoise/quadrature.hpp"
#include "colnoise/oscillatory.hpp"
#include "colnoise/kernel.hpp"
#include "colnoise/spectral.hpp"
#include "colnoise/gram.hpp"
#include "colnoise/gspace.hpp"
#include "colnoise/measures.hpp"
#include "colnoise/fock.hpp"
#include "colnoise/sim.hpp"

namespace colnoise {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace colnoise

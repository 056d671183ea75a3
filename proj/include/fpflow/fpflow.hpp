#pragma once

// Umbrella header for the fluid-particle hydrodynamics library.

#include "fpflow/common.hpp"
#include "fpflow/config.hpp"
#include "fpflow/csv.hpp"
#include "fpflow/evolve.hpp"
#include "fpflow/hugoniot.hpp"
#include "fpflow/models.hpp"
#include "fpflow/ode.hpp"
#include "fpflow/pressure.hpp"
#include "fpflow/profiles.hpp"
#include "fpflow/rootfind.hpp"
#include "fpflow/spectral.hpp"

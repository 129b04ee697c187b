#pragma once

// Umbrella header: spectral-edge estimation for half-line canonical systems.

#include "numeric.hpp"
#include "field.hpp"
#include "families.hpp"
#include "ode.hpp"
#include "prufer.hpp"
#include "spectrum.hpp"
#include "schrodinger.hpp"
#include "bounds.hpp"
#include "transforms.hpp"
#include "verify.hpp"

#pragma once

// Umbrella header for the simulation library.

#include "pushsim/controller.hpp"
#include "pushsim/dynamics.hpp"
#include "pushsim/errors.hpp"
#include "pushsim/geometry.hpp"
#include "pushsim/sim.hpp"
#include "pushsim/sweep.hpp"
#include "pushsim/version.hpp"

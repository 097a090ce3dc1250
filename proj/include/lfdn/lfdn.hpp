#pragma once

// Umbrella header for the lfdn library: exact capacity regions and
// decode-and-forward simulation for linear finite-field deterministic
// networks with many sources and one destination.

#include "lfdn/augment.hpp"
#include "lfdn/cutset.hpp"
#include "lfdn/gf2.hpp"
#include "lfdn/network.hpp"
#include "lfdn/rational.hpp"
#include "lfdn/sim.hpp"
#include "lfdn/sources.hpp"

#pragma once

// Link-level Monte-Carlo simulator for energy-aware rate adaptation of a
// MIMO WLAN receiver: mode space, fading channels, detection feasibility,
// LUT energy model, selection policies, and the sweep harness.

#include "eelink/channel.hpp"
#include "eelink/config.hpp"
#include "eelink/detect.hpp"
#include "eelink/energy.hpp"
#include "eelink/mcs.hpp"
#include "eelink/mode.hpp"
#include "eelink/ra.hpp"
#include "eelink/rng.hpp"
#include "eelink/sim.hpp"

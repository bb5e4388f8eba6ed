#pragma once
// Umbrella header for the full library.

#include "core.hpp"
#include "models.hpp"
#include "spectra.hpp"
#include "dynamics.hpp"
#include "open_systems.hpp"
#include "circuit.hpp"
#include "io.hpp"

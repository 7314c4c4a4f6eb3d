#pragma once

// Umbrella header for the annulus_lab library.

#include "annulus_lab/catalog.hpp"
#include "annulus_lab/core.hpp"
#include "annulus_lab/expr.hpp"
#include "annulus_lab/field.hpp"
#include "annulus_lab/geometry.hpp"
#include "annulus_lab/io.hpp"
#include "annulus_lab/kelvin.hpp"
#include "annulus_lab/radial.hpp"
#include "annulus_lab/scenario.hpp"
#include "annulus_lab/stream.hpp"
#include "annulus_lab/symmetry.hpp"
#include "annulus_lab/trace.hpp"

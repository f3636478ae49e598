#pragma once

// Everything in one include.

#include "torusbif/acceptance.hpp"
#include "torusbif/bounds.hpp"
#include "torusbif/branch.hpp"
#include "torusbif/config.hpp"
#include "torusbif/continuation.hpp"
#include "torusbif/error.hpp"
#include "torusbif/evolve.hpp"
#include "torusbif/field.hpp"
#include "torusbif/io.hpp"
#include "torusbif/multiplier.hpp"
#include "torusbif/operator.hpp"
#include "torusbif/oracle_bo.hpp"
#include "torusbif/spectrum.hpp"
#include "torusbif/transform.hpp"

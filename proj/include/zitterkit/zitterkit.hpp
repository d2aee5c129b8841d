#pragma once

#include "zitterkit/brackets.hpp"
#include "zitterkit/dirac_check.hpp"
#include "zitterkit/dynamics.hpp"
#include "zitterkit/error.hpp"
#include "zitterkit/lagrangian.hpp"
#include "zitterkit/minkowski.hpp"
#include "zitterkit/nonrel.hpp"
#include "zitterkit/rk4.hpp"
#include "zitterkit/rng.hpp"

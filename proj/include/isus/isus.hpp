#pragma once

#include "isus/bounds.hpp"
#include "isus/config.hpp"
#include "isus/densities.hpp"
#include "isus/emit.hpp"
#include "isus/errors.hpp"
#include "isus/estimators.hpp"
#include "isus/experiments.hpp"
#include "isus/moments.hpp"
#include "isus/numeric.hpp"
#include "isus/random.hpp"
#include "isus/stats.hpp"

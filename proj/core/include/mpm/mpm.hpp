#pragma once

#include "mpm/baseline.hpp"
#include "mpm/errors.hpp"
#include "mpm/family.hpp"
#include "mpm/filtration.hpp"
#include "mpm/inequalities.hpp"
#include "mpm/martingale.hpp"
#include "mpm/multi_index.hpp"
#include "mpm/operators.hpp"
#include "mpm/probability.hpp"
#include "mpm/rng.hpp"
#include "mpm/search.hpp"
#include "mpm/structure.hpp"

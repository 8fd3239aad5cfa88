#pragma once

#include "am2/auxiliary.hpp"
#include "am2/bifurcations.hpp"
#include "am2/config.hpp"
#include "am2/cuts.hpp"
#include "am2/equilibria.hpp"
#include "am2/ext_real.hpp"
#include "am2/io.hpp"
#include "am2/kinetics.hpp"
#include "am2/model.hpp"
#include "am2/numeric.hpp"
#include "am2/regions.hpp"
#include "am2/simulate.hpp"

#pragma once

#include "orbitlab/analysis.hpp"
#include "orbitlab/arith.hpp"
#include "orbitlab/beurling.hpp"
#include "orbitlab/discrepancy.hpp"
#include "orbitlab/multfunc.hpp"
#include "orbitlab/scenarios.hpp"
#include "orbitlab/serialize.hpp"
#include "orbitlab/sievecount.hpp"
#include "orbitlab/torus.hpp"
#include "orbitlab/version.hpp"

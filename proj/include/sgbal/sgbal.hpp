#pragma once

// Signed-graph balancing toolkit: umbrella header.

#include "sgbal/balance.hpp"
#include "sgbal/cloud.hpp"
#include "sgbal/errors.hpp"
#include "sgbal/graph.hpp"
#include "sgbal/graphl.hpp"
#include "sgbal/oracle.hpp"
#include "sgbal/rng.hpp"
#include "sgbal/tree.hpp"

#pragma once

#include "egrr/analysis.hpp"
#include "egrr/config.hpp"
#include "egrr/core.hpp"
#include "egrr/grr.hpp"
#include "egrr/harness.hpp"
#include "egrr/metrics.hpp"
#include "egrr/neighbor_index.hpp"
#include "egrr/rng.hpp"
#include "egrr/simulator.hpp"

#pragma once

#include "cnfgraph/analytics.hpp"
#include "cnfgraph/bounds.hpp"
#include "cnfgraph/clause_system.hpp"
#include "cnfgraph/errors.hpp"
#include "cnfgraph/experiment.hpp"
#include "cnfgraph/io.hpp"
#include "cnfgraph/mask.hpp"
#include "cnfgraph/model.hpp"
#include "cnfgraph/pruning.hpp"
#include "cnfgraph/rng.hpp"

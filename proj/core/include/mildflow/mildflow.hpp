#pragma once

#include "mildflow/admissibility.hpp"
#include "mildflow/bcs.hpp"
#include "mildflow/burgers.hpp"
#include "mildflow/core.hpp"
#include "mildflow/export.hpp"
#include "mildflow/flow_props.hpp"
#include "mildflow/semigroup.hpp"
#include "mildflow/solver.hpp"

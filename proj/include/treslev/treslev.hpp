#pragma once

// Core library: thresholds, elasticities, cost behavior, risk scenarios and
// curve grids. The app/ headers (config, reports, CLI) are included separately.
#include "treslev/core_model.hpp"
#include "treslev/cost_behavior.hpp"
#include "treslev/curves.hpp"
#include "treslev/curves_io.hpp"
#include "treslev/error.hpp"
#include "treslev/performance.hpp"
#include "treslev/risk_scenarios.hpp"
#include "treslev/thresholds.hpp"

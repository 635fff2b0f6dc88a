#pragma once

#include "market.hpp"
#include "json_io.hpp"
#include "simplex.hpp"
#include "matchflow.hpp"
#include "allocate.hpp"
#include "pricing.hpp"
#include "revenue_max.hpp"
#include "baselines.hpp"
#include "generators.hpp"
#include "harness.hpp"

#pragma once

#include "egolink/baselines.hpp"
#include "egolink/errors.hpp"
#include "egolink/estimator.hpp"
#include "egolink/generators.hpp"
#include "egolink/harness.hpp"
#include "egolink/io.hpp"
#include "egolink/linalg.hpp"
#include "egolink/metrics.hpp"
#include "egolink/netcore.hpp"
#include "egolink/random.hpp"

#pragma once

// Umbrella header: the full model / solver / estimation / prediction stack.

#include "votedyn/baselines.hpp"
#include "votedyn/estimation.hpp"
#include "votedyn/io.hpp"
#include "votedyn/metrics.hpp"
#include "votedyn/model.hpp"
#include "votedyn/pipeline.hpp"
#include "votedyn/prediction.hpp"
#include "votedyn/rng.hpp"
#include "votedyn/solver.hpp"
#include "votedyn/stochastic.hpp"
#include "votedyn/synthgen.hpp"

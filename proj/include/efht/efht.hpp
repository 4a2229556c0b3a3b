#pragma once

#include "efht/bound_engine.hpp"
#include "efht/config.hpp"
#include "efht/evolvers.hpp"
#include "efht/gain_sampler.hpp"
#include "efht/io.hpp"
#include "efht/loess.hpp"
#include "efht/metrics.hpp"
#include "efht/operators.hpp"
#include "efht/pipeline.hpp"
#include "efht/problems.hpp"
#include "efht/rng.hpp"
#include "efht/sample_selector.hpp"
#include "efht/surface_fit.hpp"
#include "efht/types.hpp"
#include "efht/validator.hpp"

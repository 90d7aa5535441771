#pragma once

#include "rwl1/bench.hpp"
#include "rwl1/distributions.hpp"
#include "rwl1/errors.hpp"
#include "rwl1/instance.hpp"
#include "rwl1/instance_io.hpp"
#include "rwl1/linalg.hpp"
#include "rwl1/merit.hpp"
#include "rwl1/rng.hpp"
#include "rwl1/simplex.hpp"
#include "rwl1/solver.hpp"
#include "rwl1/svg_plot.hpp"

#pragma once

#include "bench.hpp"
#include "convolution.hpp"
#include "decomposition.hpp"
#include "dp.hpp"
#include "error.hpp"
#include "feasibility.hpp"
#include "gadgets.hpp"
#include "graph.hpp"
#include "oracle.hpp"
#include "spec.hpp"

#pragma once

// Umbrella header for the SpaCoBi library.

#include "spacobi/admm.hpp"
#include "spacobi/clusters.hpp"
#include "spacobi/csv.hpp"
#include "spacobi/eigen.hpp"
#include "spacobi/errors.hpp"
#include "spacobi/heatmap.hpp"
#include "spacobi/matrix.hpp"
#include "spacobi/model_select.hpp"
#include "spacobi/parallel.hpp"
#include "spacobi/pipeline.hpp"
#include "spacobi/prox.hpp"
#include "spacobi/reports.hpp"
#include "spacobi/rng.hpp"
#include "spacobi/simulate.hpp"
#include "spacobi/sylvester.hpp"
#include "spacobi/weights.hpp"

#pragma once

#include "shiftcd/baselines/girvan_newman.hpp"
#include "shiftcd/baselines/label_propagation.hpp"
#include "shiftcd/baselines/louvain.hpp"
#include "shiftcd/baselines/spectral.hpp"
#include "shiftcd/experiment.hpp"
#include "shiftcd/graph.hpp"
#include "shiftcd/io/edge_list.hpp"
#include "shiftcd/io/gml.hpp"
#include "shiftcd/io/ground_truth.hpp"
#include "shiftcd/io/manifest.hpp"
#include "shiftcd/io/results.hpp"
#include "shiftcd/metrics.hpp"
#include "shiftcd/partition.hpp"
#include "shiftcd/rng.hpp"
#include "shiftcd/shift.hpp"
#include "shiftcd/similarity.hpp"
#include "shiftcd/suite.hpp"

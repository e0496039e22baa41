#pragma once

#include "hiercons/benchmark.hpp"
#include "hiercons/consensus.hpp"
#include "hiercons/ensemble.hpp"
#include "hiercons/graph.hpp"
#include "hiercons/io.hpp"
#include "hiercons/metrics.hpp"
#include "hiercons/modularity.hpp"
#include "hiercons/partition.hpp"
#include "hiercons/random.hpp"
#include "hiercons/resolution.hpp"

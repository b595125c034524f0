#pragma once

#include "gossip/alphas.hpp"
#include "gossip/averaging.hpp"
#include "gossip/bounds.hpp"
#include "gossip/csv.hpp"
#include "gossip/diffusion.hpp"
#include "gossip/graph.hpp"
#include "gossip/parallel.hpp"
#include "gossip/rng.hpp"
#include "gossip/sampling.hpp"
#include "gossip/spectral.hpp"

#pragma once
// Umbrella header for the knowledge-graph semantic communication library.

#include "align.hpp"
#include "bits.hpp"
#include "channel.hpp"
#include "embedding.hpp"
#include "experiment.hpp"
#include "fixture.hpp"
#include "kg.hpp"
#include "metrics.hpp"
#include "receiver.hpp"
#include "rng.hpp"
#include "service.hpp"
#include "source_coding.hpp"

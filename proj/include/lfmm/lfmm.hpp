#pragma once

#include "lfmm/aggregation.hpp"
#include "lfmm/detect.hpp"
#include "lfmm/diversity.hpp"
#include "lfmm/error.hpp"
#include "lfmm/graph.hpp"
#include "lfmm/io.hpp"
#include "lfmm/membership.hpp"
#include "lfmm/parallel.hpp"
#include "lfmm/random.hpp"
#include "lfmm/synth.hpp"
#include "lfmm/version.hpp"

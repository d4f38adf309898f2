#pragma once

#include "hatenet/core.hpp"
#include "hatenet/text.hpp"
#include "hatenet/lexicon.hpp"
#include "hatenet/ingest.hpp"
#include "hatenet/classify.hpp"
#include "hatenet/graph.hpp"
#include "hatenet/cascade.hpp"
#include "hatenet/stats.hpp"
#include "hatenet/svg.hpp"
#include "hatenet/config.hpp"
#include "hatenet/synth.hpp"
#include "hatenet/pipeline.hpp"

#pragma once

#include "gcrid/alignment.hpp"
#include "gcrid/corpus.hpp"
#include "gcrid/data.hpp"
#include "gcrid/errors.hpp"
#include "gcrid/eval.hpp"
#include "gcrid/features.hpp"
#include "gcrid/model.hpp"
#include "gcrid/scenarios.hpp"
#include "gcrid/segmentation.hpp"
#include "gcrid/synth.hpp"
#include "gcrid/utf8.hpp"

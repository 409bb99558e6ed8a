#pragma once

#include "fgd/baseline.hpp"
#include "fgd/benchmark.hpp"
#include "fgd/blink.hpp"
#include "fgd/config.hpp"
#include "fgd/error.hpp"
#include "fgd/gaze_eval.hpp"
#include "fgd/io.hpp"
#include "fgd/methods.hpp"
#include "fgd/pipeline.hpp"
#include "fgd/saccade.hpp"
#include "fgd/signal.hpp"
#include "fgd/simulate.hpp"
#include "fgd/wavelet.hpp"

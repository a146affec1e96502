#pragma once

#include "divetrack/clip.hpp"
#include "divetrack/divecode.hpp"
#include "divetrack/error.hpp"
#include "divetrack/eval.hpp"
#include "divetrack/loss.hpp"
#include "divetrack/random.hpp"
#include "divetrack/segmask.hpp"
#include "divetrack/signal.hpp"
#include "divetrack/simulator.hpp"
#include "divetrack/temporal.hpp"
#include "divetrack/trajectory.hpp"

#define DIVETRACK_VERSION "0.1.0"

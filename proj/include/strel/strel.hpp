/// @file  strel.hpp
/// @brief Umbrella header for the monitoring library

#pragma once

#include "strel/algebra.hpp"
#include "strel/automaton.hpp"
#include "strel/check.hpp"
#include "strel/distance.hpp"
#include "strel/error.hpp"
#include "strel/formula.hpp"
#include "strel/label.hpp"
#include "strel/monitor.hpp"
#include "strel/oracle.hpp"
#include "strel/parser.hpp"
#include "strel/polynomial.hpp"
#include "strel/random.hpp"
#include "strel/rewrite.hpp"
#include "strel/scenario.hpp"
#include "strel/spatial.hpp"
#include "strel/trace_io.hpp"

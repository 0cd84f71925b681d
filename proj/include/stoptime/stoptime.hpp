// Umbrella header.
#pragma once

#include "stoptime/conversions.hpp"
#include "stoptime/experiment.hpp"
#include "stoptime/fixtures.hpp"
#include "stoptime/fuzz.hpp"
#include "stoptime/games.hpp"
#include "stoptime/json_io.hpp"
#include "stoptime/problems.hpp"
#include "stoptime/rational.hpp"
#include "stoptime/report.hpp"
#include "stoptime/rng.hpp"
#include "stoptime/sampling.hpp"
#include "stoptime/space.hpp"
#include "stoptime/stopping_times.hpp"

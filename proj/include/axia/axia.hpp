#pragma once

#include "axia/catalog.hpp"
#include "axia/ec_space.hpp"
#include "axia/errors.hpp"
#include "axia/manifest.hpp"
#include "axia/meta.hpp"
#include "axia/methods.hpp"
#include "axia/parallel.hpp"
#include "axia/result_table.hpp"
#include "axia/rng.hpp"
#include "axia/stats.hpp"
#include "axia/synth.hpp"
#include "axia/tasks/chaos.hpp"
#include "axia/tasks/energy.hpp"
#include "axia/tasks/games.hpp"
#include "axia/tasks/population.hpp"
#include "axia/tasks/rainfall.hpp"
#include "axia/tasks/randomness.hpp"

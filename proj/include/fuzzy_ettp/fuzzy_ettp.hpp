#pragma once

#include "fuzzy_ettp/fuzzy.hpp"
#include "fuzzy_ettp/instance.hpp"
#include "fuzzy_ettp/config.hpp"
#include "fuzzy_ettp/instance_io.hpp"
#include "fuzzy_ettp/carter.hpp"
#include "fuzzy_ettp/random.hpp"
#include "fuzzy_ettp/generator.hpp"
#include "fuzzy_ettp/timetable.hpp"
#include "fuzzy_ettp/model.hpp"
#include "fuzzy_ettp/exact_solver.hpp"
#include "fuzzy_ettp/evaluation.hpp"
#include "fuzzy_ettp/construct.hpp"
#include "fuzzy_ettp/local_search.hpp"
#include "fuzzy_ettp/invigilation.hpp"
#include "fuzzy_ettp/bench.hpp"

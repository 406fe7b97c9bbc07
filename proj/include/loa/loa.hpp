#pragma once

#include "loa/catalog.hpp"
#include "loa/edit_distance.hpp"
#include "loa/error.hpp"
#include "loa/observer.hpp"
#include "loa/report.hpp"
#include "loa/scoring.hpp"
#include "loa/trace.hpp"
#include "loa/trace_gen.hpp"

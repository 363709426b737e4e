#pragma once

#include "mfh/csv_io.hpp"
#include "mfh/date.hpp"
#include "mfh/design.hpp"
#include "mfh/error.hpp"
#include "mfh/eval_stats.hpp"
#include "mfh/forecaster.hpp"
#include "mfh/hier_solver.hpp"
#include "mfh/mf_data.hpp"

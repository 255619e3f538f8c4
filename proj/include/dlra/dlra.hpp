#pragma once

#include "dlra/errors.hpp"
#include "dlra/matrix_kernels.hpp"
#include "dlra/low_rank.hpp"
#include "dlra/state_io.hpp"
#include "dlra/matrix_path.hpp"
#include "dlra/splitting.hpp"
#include "dlra/retraction.hpp"
#include "dlra/gauged.hpp"
#include "dlra/ode.hpp"
#include "dlra/integrate.hpp"
#include "dlra/experiments/problem.hpp"
#include "dlra/experiments/benchmark.hpp"
#include "dlra/experiments/csv.hpp"

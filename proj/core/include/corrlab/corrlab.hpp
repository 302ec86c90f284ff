#pragma once

#include "corrlab/amplitude_grid.hpp"
#include "corrlab/analytic_ratios.hpp"
#include "corrlab/correlator.hpp"
#include "corrlab/experiment_config.hpp"
#include "corrlab/experiments.hpp"
#include "corrlab/families.hpp"
#include "corrlab/hamiltonian.hpp"
#include "corrlab/history.hpp"
#include "corrlab/lattice.hpp"
#include "corrlab/measure_weight.hpp"
#include "corrlab/propagator.hpp"
#include "corrlab/records.hpp"
#include "corrlab/types.hpp"
#include "corrlab/verify.hpp"

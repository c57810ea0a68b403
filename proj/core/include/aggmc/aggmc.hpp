#pragma once

#include "aggmc/error.hpp"
#include "aggmc/factor.hpp"
#include "aggmc/gibbs.hpp"
#include "aggmc/graph.hpp"
#include "aggmc/matrix_io.hpp"
#include "aggmc/oracle.hpp"
#include "aggmc/simulation.hpp"
#include "aggmc/spectral.hpp"
#include "aggmc/stochastic.hpp"

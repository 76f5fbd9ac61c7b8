#pragma once

#include "eprlab/analytic.hpp"
#include "eprlab/config.hpp"
#include "eprlab/detector.hpp"
#include "eprlab/error.hpp"
#include "eprlab/evolution.hpp"
#include "eprlab/experiment.hpp"
#include "eprlab/io.hpp"
#include "eprlab/measurement.hpp"
#include "eprlab/numerics.hpp"
#include "eprlab/params.hpp"
#include "eprlab/rng.hpp"
#include "eprlab/sampling.hpp"
#include "eprlab/state.hpp"
#include "eprlab/sweep.hpp"
#include "eprlab/verify.hpp"
#include "eprlab/wavefunction.hpp"

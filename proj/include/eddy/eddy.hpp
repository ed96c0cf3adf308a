#pragma once

#include "eddy/fourier/biot_savart.hpp"
#include "eddy/fourier/coupling.hpp"
#include "eddy/fourier/grid.hpp"
#include "eddy/fourier/isotropy.hpp"
#include "eddy/fourier/modes.hpp"
#include "eddy/fourier/spectral_field.hpp"
#include "eddy/levy/measure.hpp"
#include "eddy/levy/rng.hpp"
#include "eddy/levy/sampler.hpp"
#include "eddy/levy/theta.hpp"
#include "eddy/marcus/corrector.hpp"
#include "eddy/marcus/jump_exponential.hpp"
#include "eddy/marcus/jump_flow.hpp"
#include "eddy/marcus/noise_operators.hpp"
#include "eddy/transport/characteristics.hpp"
#include "eddy/transport/experiment.hpp"
#include "eddy/transport/galerkin.hpp"
#include "eddy/transport/heat.hpp"
#include "eddy/euler/drift.hpp"
#include "eddy/euler/dump.hpp"
#include "eddy/euler/experiment.hpp"
#include "eddy/euler/nse.hpp"
#include "eddy/euler/solver.hpp"
#include "eddy/experiments/config.hpp"
#include "eddy/experiments/report.hpp"
#include "eddy/experiments/runner.hpp"
#include "eddy/version.hpp"

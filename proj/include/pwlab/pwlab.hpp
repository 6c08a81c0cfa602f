#pragma once

#include "pwlab/error.hpp"
#include "pwlab/numerics.hpp"
#include "pwlab/weight.hpp"
#include "pwlab/potential.hpp"
#include "pwlab/hb_model.hpp"
#include "pwlab/multiplier.hpp"
#include "pwlab/mountain.hpp"
#include "pwlab/smoothing.hpp"
#include "pwlab/interpolation.hpp"
#include "pwlab/fixtures.hpp"
#include "pwlab/json_io.hpp"

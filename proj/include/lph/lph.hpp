#pragma once

// Everything: target spaces, measure spaces, L^p_h, approximation,
// relaxation, verification, checks and file formats.

#include "lph/errors.hpp"
#include "lph/metric_space.hpp"
#include "lph/spaces.hpp"
#include "lph/measure_space.hpp"
#include "lph/lp_space.hpp"
#include "lph/approximation.hpp"
#include "lph/fixtures.hpp"
#include "lph/interpolation.hpp"
#include "lph/verify.hpp"
#include "lph/checks.hpp"
#include "lph/io.hpp"

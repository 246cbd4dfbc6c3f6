#pragma once

#include "kwidth/cvd_check.hpp"
#include "kwidth/errors.hpp"
#include "kwidth/extremal_widths.hpp"
#include "kwidth/kernel.hpp"
#include "kwidth/oracles.hpp"
#include "kwidth/sk_spline.hpp"
#include "kwidth/thresholds.hpp"
#include "kwidth/trig.hpp"

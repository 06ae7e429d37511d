#pragma once

#include "hybridgn/units.hpp"
#include "hybridgn/summation.hpp"
#include "hybridgn/special_functions.hpp"
#include "hybridgn/link_model.hpp"
#include "hybridgn/fwm_kernel.hpp"
#include "hybridgn/quadrature.hpp"
#include "hybridgn/oracle.hpp"
#include "hybridgn/gn_engine.hpp"
#include "hybridgn/sweep.hpp"

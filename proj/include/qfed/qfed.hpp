// qfed.hpp - umbrella header.

#pragma once

#include "qfed/constants.hpp"
#include "qfed/dos.hpp"
#include "qfed/errors.hpp"
#include "qfed/greens.hpp"
#include "qfed/lossless.hpp"
#include "qfed/observables.hpp"
#include "qfed/quadrature.hpp"
#include "qfed/scenario.hpp"
#include "qfed/stack.hpp"
#include "qfed/sweep.hpp"

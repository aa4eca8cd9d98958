#pragma once
// Umbrella header.

#include "qf/error.hpp"
#include "qf/exact.hpp"
#include "qf/interval.hpp"
#include "qf/lattice.hpp"
#include "qf/localform.hpp"
#include "qf/enumerate.hpp"
#include "qf/hyperbolic.hpp"
#include "qf/massledger.hpp"
#include "qf/pingpong.hpp"

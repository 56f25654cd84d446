#pragma once

#include "subbs/error.hpp"
#include "subbs/model.hpp"
#include "subbs/oracles/black_scholes.hpp"
#include "subbs/oracles/crank_nicolson.hpp"
#include "subbs/oracles/monte_carlo.hpp"
#include "subbs/oracles/random.hpp"
#include "subbs/quadrature.hpp"
#include "subbs/specfun.hpp"
#include "subbs/spectral.hpp"
#include "subbs/surface.hpp"
#include "subbs/tridiagonal.hpp"

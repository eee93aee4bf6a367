#pragma once

#include "crosspoly/hp.hpp"
#include "crosspoly/exactpoly.hpp"
#include "crosspoly/critline.hpp"
#include "crosspoly/specfun.hpp"
#include "crosspoly/quadrature.hpp"
#include "crosspoly/saddle.hpp"
#include "crosspoly/counting.hpp"
#include "crosspoly/cli.hpp"

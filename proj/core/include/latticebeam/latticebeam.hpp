#pragma once

#include "latticebeam/design.hpp"
#include "latticebeam/error.hpp"
#include "latticebeam/gaussian.hpp"
#include "latticebeam/raster.hpp"
#include "latticebeam/specfun.hpp"
#include "latticebeam/synthesis.hpp"

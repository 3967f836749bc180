#pragma once

#include "wavecrit/errors.hpp"
#include "wavecrit/rational.hpp"
#include "wavecrit/exponents.hpp"
#include "wavecrit/claims.hpp"
#include "wavecrit/grid.hpp"
#include "wavecrit/fft.hpp"
#include "wavecrit/spectral.hpp"
#include "wavecrit/trajectory.hpp"
#include "wavecrit/io.hpp"
#include "wavecrit/littlewood_paley.hpp"
#include "wavecrit/propagator.hpp"
#include "wavecrit/dealias.hpp"
#include "wavecrit/diagnostics.hpp"
#include "wavecrit/solver.hpp"
#include "wavecrit/gronwall.hpp"

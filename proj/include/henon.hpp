#pragma once

#include "henon/bifurcation.hpp"
#include "henon/closed_forms.hpp"
#include "henon/errors.hpp"
#include "henon/grid.hpp"
#include "henon/identities.hpp"
#include "henon/parallel.hpp"
#include "henon/params.hpp"
#include "henon/quadrature.hpp"
#include "henon/radial_numerics.hpp"
#include "henon/shooting.hpp"
#include "henon/spectral.hpp"
#include "henon/tridiagonal.hpp"

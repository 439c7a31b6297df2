#pragma once

#include "brinkman/grid.hpp"

namespace brinkman::serial {

// Plain single-threaded reference kernels. These are written independently
// of the OpenMP versions in grid.cpp and are what the unit tests and the
// benchmark compare against. Keep them naive; speed does not matter here.

VectorField central_gradient(const ScalarField& f);
ScalarField upwind_advect(const ScalarField& f, const VectorField& v, double dt);
double lp_norm(const ScalarField& f, double p, const ScalarField* mask = nullptr);
ScalarField mollify_space(const ScalarField& f, double eps);

}  // namespace brinkman::serial

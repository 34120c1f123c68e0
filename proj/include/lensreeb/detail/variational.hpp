#pragma once

#include "lensreeb/detail/ode.hpp"
#include "lensreeb/integrator.hpp"

namespace lensreeb::detail {

// State layout: x (4), Phi column-major (16), action (1).
using VarIntegrator = DenseIntegrator<21>;

/// The returned closure keeps a reference to `model`.
VarIntegrator::Rhs variational_rhs(const HamiltonianModel& model, TimeParam time);
VarIntegrator::State variational_initial(const PhasePoint& x0);
VariationalSample variational_sample(const VarIntegrator::State& s, double t);

}  // namespace lensreeb::detail

#pragma once

#include "ising_dephasing/correlators.hpp"
#include "ising_dephasing/cumulant.hpp"
#include "ising_dephasing/errors.hpp"
#include "ising_dephasing/exact.hpp"
#include "ising_dephasing/model.hpp"
#include "ising_dephasing/quadrature.hpp"
#include "ising_dephasing/sweep.hpp"

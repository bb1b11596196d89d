#pragma once

#include "qspin/error.hpp"
#include "qspin/linalg.hpp"
#include "qspin/quaternion.hpp"
#include "qspin/parallel.hpp"
#include "qspin/spin_dynamics.hpp"
#include "qspin/em_field.hpp"
#include "qspin/em_solutions.hpp"
#include "qspin/lorentz.hpp"

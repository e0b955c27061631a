#pragma once

#include "orbitfix/solvers/problem.hpp"
#include "orbitfix/solvers/solvers.hpp"
#include "orbitfix/solvers/trace.hpp"

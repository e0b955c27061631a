#pragma once

#include "orbitfix/numlin/csv.hpp"
#include "orbitfix/numlin/eigenvalues.hpp"
#include "orbitfix/numlin/fd_jacobian.hpp"
#include "orbitfix/numlin/krylov.hpp"
#include "orbitfix/numlin/linear_operator.hpp"
#include "orbitfix/numlin/spectral.hpp"
#include "orbitfix/numlin/types.hpp"

#pragma once

#include "orbitfix/boussinesq/boussinesq.hpp"

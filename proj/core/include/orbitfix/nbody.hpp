#pragma once

#include "orbitfix/nbody/nbody.hpp"

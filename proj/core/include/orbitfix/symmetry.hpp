#pragma once

#include "orbitfix/symmetry/group_action.hpp"

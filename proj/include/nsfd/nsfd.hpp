#pragma once

// Umbrella header for the whole toolkit.

#include "nsfd/benchmark.hpp"
#include "nsfd/conservation.hpp"
#include "nsfd/csv.hpp"
#include "nsfd/denominator.hpp"
#include "nsfd/equilibria.hpp"
#include "nsfd/errors.hpp"
#include "nsfd/integrators.hpp"
#include "nsfd/linalg.hpp"
#include "nsfd/matrix.hpp"
#include "nsfd/model.hpp"
#include "nsfd/models.hpp"
#include "nsfd/state.hpp"

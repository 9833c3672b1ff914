#pragma once

// Umbrella header.

#include "addcomb/budgets.hpp"
#include "addcomb/constructions.hpp"
#include "addcomb/errors.hpp"
#include "addcomb/experiment.hpp"
#include "addcomb/group.hpp"
#include "addcomb/laws.hpp"
#include "addcomb/quantities.hpp"
#include "addcomb/rng.hpp"
#include "addcomb/spectral.hpp"

#pragma once

#include "permlim/concentration.hpp"
#include "permlim/convergence.hpp"
#include "permlim/counting.hpp"
#include "permlim/density.hpp"
#include "permlim/errors.hpp"
#include "permlim/metrics.hpp"
#include "permlim/permutation.hpp"
#include "permlim/permuton.hpp"
#include "permlim/random.hpp"
#include "permlim/rational.hpp"
#include "permlim/sampling.hpp"

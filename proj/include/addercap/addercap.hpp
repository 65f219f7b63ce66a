#pragma once

#include "addercap/capacity_region.hpp"
#include "addercap/certify.hpp"
#include "addercap/entropy.hpp"
#include "addercap/poisson_binomial.hpp"
#include "addercap/sampling.hpp"
#include "addercap/serialize.hpp"

#pragma once

#include "soqd/correlate.hpp"
#include "soqd/evolve.hpp"
#include "soqd/experiments.hpp"
#include "soqd/features.hpp"
#include "soqd/io.hpp"
#include "soqd/model.hpp"
#include "soqd/oracle.hpp"
#include "soqd/quadrature.hpp"
#include "soqd/resolvent.hpp"
#include "soqd/subspace.hpp"

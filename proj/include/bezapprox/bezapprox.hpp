#pragma once

#include "error.hpp"
#include "binomial.hpp"
#include "polybasis.hpp"
#include "curve.hpp"
#include "degree.hpp"
#include "metrics.hpp"
#include "adaptive.hpp"
#include "features.hpp"
#include "experiments.hpp"

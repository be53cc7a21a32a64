#pragma once

#include "pcamf/bounds.hpp"
#include "pcamf/dynamics.hpp"
#include "pcamf/experiment.hpp"
#include "pcamf/graph.hpp"
#include "pcamf/markov.hpp"
#include "pcamf/mean_field.hpp"
#include "pcamf/numeric.hpp"
#include "pcamf/pca.hpp"
#include "pcamf/rng.hpp"

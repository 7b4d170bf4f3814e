// Umbrella header.
#pragma once

#include "wchan/blahut_arimoto.hpp"
#include "wchan/capacity.hpp"
#include "wchan/channel_matrix.hpp"
#include "wchan/markov_sim.hpp"
#include "wchan/matrix.hpp"
